"""Computational companion for mod p representations of GL2(Q_p) and D^x.

Modules:

* ``coeffs``: truncated Witt vectors, characters, cyclotomic values.
* ``groups``: GL2 over Witt rings and the unit group of the quaternion order.
* ``modrep``: modules over group algebras, socles, Jordan-Holder factors.
* ``gl2types``: Serre weights and tame types of GL2(Z_p).
* ``lattices``: stable lattices, reductions and gluing.
* ``quatrep``: the graded group algebra of U^1_D and lattices for D^x.
* ``weights``: Serre weight tables on both sides.
* ``graded``: Hilbert series and GK dimension of monomial quotients.
* ``cli``: the ``artifact`` command.
"""

__version__ = "0.1.0"
