"""
A partial automaton with unbounded chains
=========================================

The bundled four-state machine induces an injective map on words of
each length.  The word 1^(2k) sits on a cycle of length 2^k while
1^(2k)01 sits on a chain at least as long, so no power of the map is a
group element.
"""

from epiconj import automata

M = automata.appendix_a_machine()
print(automata.dump_machine(M))

for k in range(1, 9):
    short = automata.orbit_report(M, 2 * k)
    long = automata.orbit_report(M, 2 * k + 2)
    print(
        f"k={k}: 1^{2 * k} on {short.orbit_of('1' * 2 * k)}, "
        f"1^{2 * k}01 on {long.orbit_of('1' * 2 * k + '01')}"
    )

probe = automata.group_bound_probe(M, 12)
print("longest chain per length:", probe.max_chains)
print("finitary bound:", automata.finitary_bound(M))
