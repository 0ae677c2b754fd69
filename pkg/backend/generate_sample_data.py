"""
Generate sample inputs for the shapetensor demo and command line.

This creates:
1. Body specifications (ball, ellipsoid, pyramid, cube, hexagon, two polytopes)
2. Surface tensor records of every body up to rank 4
3. Harmonic intrinsic volume records, exact and with noise
4. OFF meshes of the polytopes
"""

from datetime import datetime
from pathlib import Path

import numpy as np

from core.adapters import AdapterFactory
from core.bodies.polytope import Polytope
from core.bodies.reference import reference_body, surface_area_measure
from core.models import BodySpec
from core.reconstruct.noise import noise_model, relative_sigma
from core.tensors.bijection import harmonic_vector
from core.tensors.moments import tensor_set

MAX_RANK = 4
SEED = 20240611


def sample_bodies(rng: np.random.Generator) -> dict:
    """Named body specs written to sample_data"""
    hull = Polytope.from_vertices(rng.standard_normal((12, 3)))
    return {
        'ball': BodySpec.ball(),
        'ellipsoid': BodySpec.ellipsoid(),
        'pyramid': BodySpec.pyramid(),
        'cube': BodySpec.cube(),
        'hexagon': BodySpec.regular_polygon(6),
        'corner_cut_cube': BodySpec.polytope(
            normals=np.vstack([np.eye(3), -np.eye(3), np.ones((1, 3)) / np.sqrt(3)]),
            supports=[0.5] * 6 + [0.6],
        ),
        'random_hull': BodySpec.polytope(vertices=hull.vertices.tolist()),
    }


def main():
    """Generate all sample data"""
    print("🔧 Generating sample data...")
    print("=" * 60)

    output_dir = Path(__file__).parent / "sample_data"
    rng = np.random.default_rng(SEED)
    bodies = sample_bodies(rng)

    print("\n📐 Writing body specifications...")
    for name, spec in bodies.items():
        AdapterFactory.save(spec, output_dir / f"{name}.json")
    print(f"   ✓ {len(bodies)} bodies")

    print("\n🧮 Computing surface tensors and harmonic intrinsic volumes...")
    for name, spec in bodies.items():
        measure = surface_area_measure(spec, "medium")
        AdapterFactory.save(tensor_set(measure, MAX_RANK), output_dir / name / "tensors.json")
        harmonics = harmonic_vector(measure, MAX_RANK)
        AdapterFactory.save(harmonics, output_dir / name / "harmonics.json")

        sigma = relative_sigma(harmonics, (0.01,))[0]
        noisy = harmonics + noise_model(spec.dim, MAX_RANK, sigma, seed=SEED)
        AdapterFactory.save(noisy, output_dir / name / "harmonics_noisy.json")
        print(f"   ✓ {name:<12} surface area {measure.total_mass:.6f}")

    print("\n🔺 Writing OFF meshes...")
    for name in ('pyramid', 'cube', 'hexagon', 'corner_cut_cube', 'random_hull'):
        AdapterFactory.save(reference_body(bodies[name]), output_dir / f"{name}.off")
    print("   ✓ 5 meshes")

    readme_content = (
        """# Sample Data

Inputs for the demo and the `shapetensor` command line.

## Files:

- **<body>.json**: Body specifications (ball, ellipsoid, pyramid, cube,
  hexagon, corner_cut_cube, random_hull)
- **<body>/tensors.json**: Surface tensors up to rank 4
- **<body>/harmonics.json**: Harmonic intrinsic volumes up to degree 4
- **<body>/harmonics_noisy.json**: The same with Gaussian noise of 1% of psi_0
- **<body>.off**: Meshes of the polytopes

## Usage:

```bash
cd backend
shapetensor reconstruct sample_data/pyramid/tensors.json --out out/
shapetensor reconstruct sample_data/pyramid/harmonics_noisy.json --noisy --out out/
```

Generated: """
        + datetime.now().isoformat()
    )
    (output_dir / "README.md").write_text(readme_content + "\n")

    print("\n" + "=" * 60)
    print("✅ Sample Data Generation Complete!")
    print(f"\n📂 Output Directory: {output_dir.absolute()}")
    print("\n🚀 Ready to run demo:")
    print("   cd backend")
    print("   python demo_reconstruction.py")
    print()


if __name__ == "__main__":
    main()
