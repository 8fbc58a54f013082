"""Order-invariant computation toolkit.

Subpackages and modules:

- ``hfset``: canonical hereditarily finite sets over an atom universe.
- ``bgs``: parser and interpreter for the set-machine language, with
  polynomial step/active budgets and an optional cardinality builtin.
- ``matching``: bipartite matching via stable coloring, saturation and a
  canonically ordered path algorithm.
- ``cfi``: twisted gadget graphs, their automorphisms, padding, and the
  parity classifier.
- ``multipede``: segment/feet structures with hyperedges, rigidity checks
  and the two isomorphism deciders.
- ``linalg``: matrices over unordered index sets, finite fields as explicit
  tables, group-order powering, prime sieve and integer matrix tests.
- ``cli``: the ``choiceless-lab`` command line front end.
"""

__version__ = "0.1.0"
