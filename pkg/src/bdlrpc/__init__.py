"""Bounded-degree LRPC codes over F_{q^m}.

Finite-field and F_q linear algebra, subspaces of F_{q^m}, the three-phase
expansion decoder, the Omega_t counting machinery and a seeded experiment
harness.
"""

from __future__ import annotations

__version__ = "0.1.0"
