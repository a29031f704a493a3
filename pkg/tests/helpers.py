import numpy as np
from scipy.stats import unitary_group

from cvhybrid import gaussian_core as gc


def random_transforms(rng, num_modes, length):
    """Random symplectic transforms, as (recipe entry, transform) pairs."""
    out = []
    for _ in range(length):
        kind = rng.choice(["displace", "squeeze", "two_mode_squeeze", "unitary"] if num_modes > 1
                          else ["displace", "squeeze"])
        mode = int(rng.integers(num_modes))
        z = complex(rng.normal(), rng.normal())
        if kind == "displace":
            out.append((("displace", mode, z), gc.displacement_transform(num_modes, mode, z)))
        elif kind == "squeeze":
            zeta = 0.8 * z / max(abs(z), 1.0)
            out.append((("squeeze", mode, zeta), gc.squeeze_transform(num_modes, mode, zeta)))
        elif kind == "two_mode_squeeze":
            i, j = rng.choice(num_modes, 2, replace=False)
            zeta = 0.8 * z / max(abs(z), 1.0)
            out.append((("two_mode_squeeze", int(i), int(j), zeta),
                        gc.two_mode_squeeze_transform(num_modes, int(i), int(j), zeta)))
        else:
            u = unitary_group.rvs(num_modes, random_state=rng)
            out.append((("unitary", u), gc.passive_transform(u)))
    return out


def random_oracle_recipe(rng, num_modes=2, length=3, max_alpha=1.0, max_zeta=0.3):
    """Short recipe inside the number-basis oracle's convergence range."""
    recipe = []
    for _ in range(length):
        ops = ["displace", "squeeze"] + (["two_mode_squeeze", "unitary"] if num_modes == 2 else [])
        kind = rng.choice(ops)
        mode = int(rng.integers(num_modes))
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi))
        if kind == "displace":
            recipe.append(("displace", mode, max_alpha * rng.uniform() * phase))
        elif kind == "squeeze":
            recipe.append(("squeeze", mode, max_zeta * rng.uniform() * phase))
        elif kind == "two_mode_squeeze":
            recipe.append(("two_mode_squeeze", 0, 1, max_zeta * rng.uniform() * phase))
        else:
            recipe.append(("unitary", unitary_group.rvs(2, random_state=rng)))
    return recipe
