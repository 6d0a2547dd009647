"""Randomized verification of the built-in inequality chains.

Each chain is a DAG of weighted measures.  Every edge is checked on seeded
uniform, near-boundary and near-diagonal pairs across dimensions 2..16.
Chains that fail print the offending edge and a witness pair.
"""

import divkit as dk

TRIALS = 20_000
for chain in dk.builtin_chains():
    rep = dk.run_chain(chain, TRIALS, range(2, 17), seed=0)
    status = "ok" if rep.verified else f"{rep.violation_count} violations"
    print(f"{chain.name:12s} {len(chain.nodes):2d} nodes {len(chain.edges):3d} edges  {status}")
    for e in rep.edges:
        if e.passed < e.checked:
            label = e.note or f"{e.edge[0]} <= {e.edge[1]}"
            print(f"    edge {label}: {e.checked - e.passed}/{e.checked} fail, worst slack {e.worst_slack:.3g}")
    if rep.violations:
        v = max(rep.violations, key=lambda v: v.deficit)
        print(f"    largest deficit {v.deficit:.3g} at p=[{', '.join(f'{x:.3g}' for x in v.p)}] q=[{', '.join(f'{x:.3g}' for x in v.q)}]")

# The identity suite: equalities between measures that should hold exactly.
ids = dk.check_identities(5_000, range(2, 17), seed=0)
print("\nidentities")
for r in ids.results:
    flag = "holds" if r.holds else ("differs (report only)" if r.verdict_only else "FAILS")
    print(f"  {r.name:22s} worst rel err {r.max_rel_err:8.1e}  {flag}")
