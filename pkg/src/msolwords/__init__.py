"""Weighted logics and automata on words over commutative semirings.

Modules: ``semiring`` (carriers and law checks), ``words`` (word
structures), ``mso`` (classical MSO), ``msoleval`` (MSOL-polynomial
terms), ``wmsol`` (weighted MSO and its fragments), ``automata`` (weighted
automata and Hankel analysis), ``translate`` (formula/term translations)
and ``cli``.
"""

__version__ = "0.1.0"
