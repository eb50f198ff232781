"""Cirquents with clustered choice operators: syntax, game semantics, a
proof calculus, purification and a proof-producing decision procedure."""
