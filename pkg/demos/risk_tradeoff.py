"""One-person versus two-person rule as a probability trade-off.

The danger under the one-person rule combines the insider probability p0
with the door-exposure probability p1 by inclusion-exclusion; under the
two-person rule an accompanied insider is assumed harmless, leaving only
the (larger) door-exposure probability p2.  The rational policy picks the
smaller total.
"""

from insiderctl.airplane import risk_compare


def main():
    print(f"{'p0':>8} {'p1':>8} {'p2':>8} {'one_person':>12} {'two_person':>12}  recommendation")
    for p0, p1, p2 in [
        (1e-6, 1e-5, 5e-5),
        (1e-6, 1e-5, 1e-5),
        (1e-4, 1e-5, 5e-5),
        (0.0, 0.0, 1e-4),
        (0.01, 0.01, 0.02),
        (0.0, 0.5, 0.5),
    ]:
        r = risk_compare(p0, p1, p2)
        print(
            f"{p0:>8g} {p1:>8g} {p2:>8g} {r.one_person:>12.6g} {r.two_person:>12.6g}  {r.recommend}"
        )
    print()
    print("with negligible insider risk the one-person rule wins; as p0 grows")
    print("past p2 - p1 the two-person rule becomes the rational choice.")


if __name__ == "__main__":
    main()
