"""HH of k[x]/(x^s) from the two-periodic resolution of a hypersurface.

For A = k[x]/(f) the complex A <-0- A <-f'- A <-0- A <-f'- ... computes
HH_*(A): HH_0 = A, HH_{2i+1} = A/(f') and HH_{2i} = Ann(f') for i >= 1.
With f = x^s the generator in homological degree 2i has internal degree
i*s and the one in degree 2i+1 has internal degree i*s + 1.
"""

from __future__ import annotations


def truncated_polynomial_hh_dims(p: int, s: int, n: int, bound: int) -> dict:
    """{internal degree d: dim HH_n(F_p[x]/(x^s))_d} for d <= bound."""
    if s < 1 or n < 0:
        raise ValueError("need s >= 1 and n >= 0")
    c = s % p  # f' = c x^(s-1)
    if n == 0:
        monos, shift = range(s), 0
    elif n % 2:
        # A/(f'): all of A when f' = 0, else degrees < s - 1
        monos = range(s) if c == 0 else range(s - 1)
        shift = (n // 2) * s + 1
    else:
        # Ann(f'): all of A when f' = 0, zero when f' is a unit, else (x)
        monos = range(s) if c == 0 else range(1, s) if s > 1 else range(0)
        shift = (n // 2) * s
    out = {d: 0 for d in range(bound + 1)}
    for a in monos:
        if a + shift <= bound:
            out[a + shift] += 1
    return out
