"""A walking tour of the single-family machinery.

Three presentations, three different fates: a free family (pure shift),
a two-node cycle (unitary, singular), and a cycle with branching
(unitary but dilation-type, the structure slice escapes).

Run:  python3 demos/single_family_tour.py
"""

from rowiso.lebesgue import classify_unitary
from rowiso.presentation import Presentation, enumerate, free_presentation
from rowiso.wold import is_row_unitary, wold


def show(title, p):
    print(f"== {title} ==")
    print(f"   base {p.base}, m={p.m}, edges {p.edges}")
    res = wold(p)
    print(f"   row-unitary: {is_row_unitary(p)}")
    print(f"   unitary part: {res.unitary_part}")
    print(f"   shift part:   {res.shift_part}")
    print(f"   wandering vectors: {[repr(x) for x in res.wandering]}"
          f"  (multiplicity {res.multiplicity})")
    leb = classify_unitary(p)
    for comp in leb.components:
        print(f"   cycle {comp.cycle}: {comp.kind.value}")
    print(f"   structure support PH: {leb.PH}")
    print(f"   first basis elements: "
          f"{', '.join(repr(x) for x in enumerate(p, 2)[:6])}")
    print()


def main():
    show("free family on two letters", free_presentation(2))

    show("two-node cycle (m=1)",
         Presentation(1, ("a", "b"), {("a", 1): "b", ("b", 1): "a"}))

    # the same cycle inside a two-letter family: the second letter
    # walks straight off the cycle slice, which is the dilation-type
    # signature
    show("cycle with room to escape (m=2)",
         Presentation(2, ("a", "b"), {("a", 1): "b", ("b", 1): "a"}))


if __name__ == "__main__":
    main()
