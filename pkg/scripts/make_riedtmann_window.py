"""Write the windowed cover of the Riedtmann algebra and its covering functor.

Usage: python3 scripts/make_riedtmann_window.py [radius] > fixtures/riedtmann_window.alg
"""

import sys

SIGMA_PLUS = {2, 3}  # i mod 4 where sigma_i goes to sigma + sigma*rho
DELTA_PLUS = {0, 3}  # i mod 4 where delta_i goes to delta + rho*delta


def ix(i: int) -> str:
    """Index suffix; negative indices are written m1, m2, ..."""
    return str(i) if i >= 0 else f"m{-i}"


def main(r: int = 5) -> str:
    out = [f"# cover of riedtmann.alg on the window -{r}..{r}", "algebra riedtmann_window", "field GF(2)"]
    out.append("vertex " + " ".join(f"x{ix(i)} y{ix(i)}" for i in range(-r, r + 1)))
    for i in range(-r, r):
        out.append(f"arrow rho{ix(i)}: y{ix(i)} -> y{ix(i + 1)}")
        out.append(f"arrow sigma{ix(i)}: y{ix(i)} -> x{ix(i + 1)}")
        out.append(f"arrow delta{ix(i)}: x{ix(i)} -> y{ix(i + 1)}")
    for i in range(-r, r - 1):
        out.append(f"relation delta{ix(i + 1)}*sigma{ix(i)} - rho{ix(i + 1)}*rho{ix(i)}")
        out.append(f"relation sigma{ix(i + 1)}*delta{ix(i)}")
    out += ["", "functor riedtmann_F from riedtmann_window to riedtmann.alg"]
    for i in range(-r, r + 1):
        out.append(f"object x{ix(i)} -> x")
        out.append(f"object y{ix(i)} -> y")
    for i in range(-r, r):
        out.append(f"map rho{ix(i)} = rho")
        out.append(f"map sigma{ix(i)} = " + ("sigma + sigma*rho" if i % 4 in SIGMA_PLUS else "sigma"))
        out.append(f"map delta{ix(i)} = " + ("delta + rho*delta" if i % 4 in DELTA_PLUS else "delta"))
    for i in range(-r, r):
        out.append(f"shift x{ix(i)} -> x{ix(i + 1)}")
        out.append(f"shift y{ix(i)} -> y{ix(i + 1)}")
    inner = r - 3  # nonzero paths have length at most 3
    out.append("interior " + " ".join(f"x{ix(i)} y{ix(i)}" for i in range(-inner, inner + 1)))
    return "\n".join(out) + "\n"


if __name__ == "__main__":
    sys.stdout.write(main(int(sys.argv[1]) if len(sys.argv) > 1 else 5))
