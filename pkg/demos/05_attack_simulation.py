# Run each scripted attack and check that no attacker message is ever
# accepted and every acceptance traces back to an honest signing.
from e2ibs import sim

for sc in sim.builtin_scenarios(forge_attempts=50):
    res = sim.run_scenario(sc, seed=1)
    ok, witness = sim.assert_correspondence(res.trace)
    leaks = len(sim.attacker_acceptances(res.trace))
    shown = res.verdicts if len(res.verdicts) < 5 else res.verdicts[:2] + ["..."]
    print(f"{sc.name:<20} {str(shown):<55} correspondence={'ok' if ok else 'BROKEN'} leaks={leaks}")

print()
print(sim.run_scenario(sim.get_scenario("relay_delay"), seed=1).trace_tsv())
