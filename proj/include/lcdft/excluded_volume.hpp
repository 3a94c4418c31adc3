#pragma once

#include "lcdft/geometry.hpp"
#include "lcdft/shapes.hpp"
#include "lcdft/so3.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace lcdft {

/// Edge vectors of T1 and -T2 in the Appendix notation: a = AO, b = OB,
/// c = BA for each triangle. Primed edges are those of the *negated*
/// second triangle, i.e. a2 = -p_bar * a.
struct EdgeSet {
    Vec3 a, b, c;     // triangle 1
    Vec3 a2, b2, c2;  // -triangle 2
    Vec3 m3;          // body normal of molecule 1 (unit)
    Vec3 m3p;         // body normal of molecule 2 (unit, lab frame)

    /// Builds edges for K = T1 - T2 with T1 = tri and T2 = p_bar * tri.
    static EdgeSet from_triangles(const TriangleVertices& tri, const Mat3& p_bar);
    /// Same with T2 negated, i.e. the body T1 + T2 (used by the sum identity).
    static EdgeSet from_triangles_sum(const TriangleVertices& tri, const Mat3& p_bar);

    /// Throws if a+b+c or a2+b2+c2 fail closure at 1e-12.
    void check_closure() const;
};

enum class V2Case { Intersecting, Disjoint, Parallel };

std::string to_string(V2Case c);

/// Volume of K: quarter of the six-term mixed-product sum. (Each prism in
/// the decomposition carries volume |mixed product|/2, so the half-sum
/// double-counts; verified against an exact convex-hull oracle.)
double steiner_v3(const EdgeSet& e);

/// Surface area of K with the case tag. Edges are relabeled cyclically until
/// (m3.a2)(m3.b2) >= 0 and (m3p.a)(m3p.b) >= 0; the sign of (m3.c2)(m3p.c)
/// then selects the seven-term (Intersecting) or six-term (Disjoint) sum.
/// Parallel molecular planes take the exact flat-polygon path.
std::pair<double, V2Case> steiner_v2(const EdgeSet& e);

/// Mean-width functional: half the summed edge lengths.
double steiner_v1(const EdgeSet& e);

/// 2 L^2 D |m x m'| + 2 pi L D^2 + (4/3) pi D^3 for |m x m'| = gamma_abs.
double rod_excluded_volume(double L, double D, double gamma_abs);

struct ExcludedVolumeResult {
    double value = 0.0;
    double stderr_ = 0.0;  // 0 for analytic paths
    enum class Method { Analytic, Slab2D, MonteCarlo } method = Method::Analytic;
    std::optional<V2Case> case_tag;
};

std::string to_string(ExcludedVolumeResult::Method m);

/// Steiner-formula excluded volume of two congruent spherotriangles at
/// relative rotation p_bar. Degenerate triangles (apex angle at pi or 0)
/// route to the rod closed form.
ExcludedVolumeResult spherotriangle_excluded_volume(const MoleculeShape& shape, const Mat3& p_bar);

/// Minimum distance between the two center sets (segments / arm pairs /
/// triangles); the swept bodies overlap iff this is <= D.
double primitive_distance(const MoleculeShape& shape, const Mat3& p_bar, const Vec3& x_rel);

/// Hit-or-miss Monte Carlo estimate of the excluded volume over the cube of
/// half-width 2L + D. Deterministic per (seed, n_samples); chunked for
/// parallel evaluation with per-chunk derived seeds.
ExcludedVolumeResult mc_excluded_volume(const MoleculeShape& shape, const Mat3& p_bar, double D,
                                        long n_samples, std::uint64_t seed);

struct BentCoreOptions {
    double rel_tol = 1e-4;   // successive grid-refinement agreement
    int min_grid = 128;
    int max_grid = 2048;
    long mc_fallback_samples = 10'000'000;  // only if refinement fails
    std::uint64_t mc_seed = 1234;
};

/// Excluded volume of two bent-core molecules as the union of four
/// spheroparallelograms: analytic single volumes, pair/triple/quadruple
/// intersections by 2D slab integration with Richardson refinement.
ExcludedVolumeResult bentcore_excluded_volume(const MoleculeShape& shape, const Mat3& p_bar,
                                              const BentCoreOptions& opt = {});

/// Internal pieces of the bent-core computation, exposed for testing.
struct BentCoreBreakdown {
    double singles = 0.0;     // sum of analytic |V_ij|
    double pairs = 0.0;       // sum over the 6 pairwise intersections
    double triples = 0.0;     // sum over the 4 triple intersections
    double quad = 0.0;        // quadruple intersection
    double union_direct = 0.0;  // direct union integral on the same grid
    int grid = 0;
};

BentCoreBreakdown bentcore_breakdown(const MoleculeShape& shape, const Mat3& p_bar, int grid_n);

struct SoftKernelGrid {
    int n = 96;               // points per axis
    double half_extent = 0.0; // 0: automatic from the support bound
};

/// Mayer-function homogenized kernel: integrates 1 - exp(-U/kBT) over x_rel
/// on a 3D midpoint grid. HardCore uses the exact overlap indicator
/// (primitive distance), LennardJones the bead sum.
double soft_kernel(const MoleculeShape& shape, const PairPotential& pot, double kBT,
                   const Mat3& p_bar, const SoftKernelGrid& grid);

}  // namespace lcdft
