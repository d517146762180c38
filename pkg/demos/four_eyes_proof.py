"""The two-person rule, its hidden assumption, and the closed proof.

First tries to prove the global security property under the four-eyes
policies alone; the proof fails although the two-person occupancy invariant
holds, because the rule says nothing about *who* the second person is.
Adding the foe-control assumption (a present non-foe disables the foe)
closes the proof over every reachable state.
"""

from insiderctl import airplane
from insiderctl.ctl import check, extract_trace, format_trace, reachable
from insiderctl.formula import parse_formula


def main():
    model = airplane.build_airplane_model("four_eyes")
    kripke = reachable(model)
    print("== four-eyes policies, no extra assumption ==")
    print(f"reachable states: {len(kripke.states)}")

    occupancy = min(len(g.placement(airplane.cockpit)) for g in kripke.graphs)
    print(f"minimum cockpit occupancy across all reachable states: {occupancy}")
    print("two-person invariant holds; Eve is never physically in the cockpit:",
          all("Eve" not in g.placement(airplane.cockpit) for g in kripke.graphs))

    goal = parse_formula("AG eve_ok")
    verdict = check(kripke, goal)
    print(f"\ncheck {'{'}AG eve_ok{'}'}: {'holds' if verdict.holds else 'fails'}")
    counterexample = extract_trace(kripke, goal, "counterexample")
    print(f"counterexample ({len(counterexample)} steps):")
    print(format_trace(kripke, counterexample))
    print("the insider impersonating the copilot is put-enabled even with")
    print("two people present; occupancy alone does not disable her.")

    print("\n== adding the foe-control assumption for the cockpit ==")
    assumed = model.with_assumptions([airplane.cockpit_foe_control()])
    kripke2 = reachable(assumed)
    verdict2 = check(kripke2, goal)
    print(f"check {'{'}AG eve_ok{'}'}: {'holds' if verdict2.holds else 'fails'}")
    print("every reachable state keeps a non-foe in the cockpit, so the")
    print("assumption applies everywhere and the global proof closes.")


if __name__ == "__main__":
    main()
