#include "lcdft/so3.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lcdft {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
    x = std::fmod(x, kTwoPi);
    if (x < 0) x += kTwoPi;
    if (x == kTwoPi) x = 0.0;
    return x;
}
}  // namespace

bool EulerAngles::in_range() const {
    return alpha >= 0.0 && alpha <= kPi && beta >= 0.0 && beta < kTwoPi && gamma >= 0.0 &&
           gamma < kTwoPi;
}

Rotation Rotation::from_matrix(const Mat3& m) {
    const Mat3 gram = m.transpose() * m;
    if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("Rotation::from_matrix: matrix is not orthonormal");
    if (std::abs(m.determinant() - 1.0) > 1e-12)
        throw std::invalid_argument("Rotation::from_matrix: determinant is not +1");
    return Rotation(m);
}

Rotation Rotation::about_axis(const Vec3& axis, double angle) {
    return Rotation(Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix());
}

Rotation euler_to_matrix(const EulerAngles& angles) {
    if (!angles.in_range()) throw std::invalid_argument("euler_to_matrix: angles out of range");
    const double ca = std::cos(angles.alpha), sa = std::sin(angles.alpha);
    const double cb = std::cos(angles.beta), sb = std::sin(angles.beta);
    const double cg = std::cos(angles.gamma), sg = std::sin(angles.gamma);
    Mat3 m;
    m << ca, -sa * cg, sa * sg,                                         //
        sa * cb, ca * cb * cg - sb * sg, -ca * cb * sg - sb * cg,       //
        sa * sb, ca * sb * cg + cb * sg, -ca * sb * sg + cb * cg;
    return Rotation::from_matrix_unchecked(m);
}

EulerAngles matrix_to_euler(const Rotation& r) {
    const Mat3& m = r.matrix();
    const double ca = std::clamp(m(0, 0), -1.0, 1.0);
    const double alpha = std::acos(ca);
    const double sa = std::sin(alpha);
    if (sa > 1e-12) {
        return {alpha, wrap_2pi(std::atan2(m(2, 0), m(1, 0))),
                wrap_2pi(std::atan2(m(0, 2), -m(0, 1)))};
    }
    // Gimbal representative: gamma = 0. At alpha = 0 only beta+gamma is
    // determined, at alpha = pi only beta-gamma.
    if (ca > 0.0) return {0.0, wrap_2pi(std::atan2(m(2, 1), m(1, 1))), 0.0};
    return {kPi, wrap_2pi(std::atan2(-m(2, 1), -m(1, 1))), 0.0};
}

Rotation relative_rotation(const Rotation& p, const Rotation& p_prime) {
    return Rotation::from_matrix_unchecked(p.matrix().transpose() * p_prime.matrix());
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev initial guess, Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

SO3Quadrature haar_quadrature(int n_alpha, int n_beta, int n_gamma) {
    if (n_alpha < 2 || n_beta < 2 || n_gamma < 2)
        throw std::invalid_argument("haar_quadrature: resolutions must be >= 2");
    std::vector<double> t, wt;
    gauss_legendre(n_alpha, t, wt);
    SO3Quadrature q;
    q.n_alpha = n_alpha;
    q.n_beta = n_beta;
    q.n_gamma = n_gamma;
    q.nodes.reserve(static_cast<std::size_t>(n_alpha) * n_beta * n_gamma);
    q.weights.reserve(q.nodes.capacity());
    const double wbg = 1.0 / (static_cast<double>(n_beta) * n_gamma);
    for (int i = 0; i < n_alpha; ++i) {
        const double alpha = std::acos(t[i]);
        const double w = 0.5 * wt[i] * wbg;
        for (int j = 0; j < n_beta; ++j) {
            const double beta = kTwoPi * j / n_beta;
            for (int k = 0; k < n_gamma; ++k) {
                const double gamma = kTwoPi * k / n_gamma;
                q.nodes.push_back(euler_to_matrix({alpha, beta, gamma}).matrix());
                q.weights.push_back(w);
            }
        }
    }
    return q;
}

S2Quadrature s2_quadrature(int n_alpha, int n_beta) {
    if (n_alpha < 2 || n_beta < 2)
        throw std::invalid_argument("s2_quadrature: resolutions must be >= 2");
    std::vector<double> t, wt;
    gauss_legendre(n_alpha, t, wt);
    S2Quadrature q;
    q.nodes.reserve(static_cast<std::size_t>(n_alpha) * n_beta);
    q.weights.reserve(q.nodes.capacity());
    for (int i = 0; i < n_alpha; ++i) {
        const double ca = t[i];
        const double sa = std::sqrt(std::max(0.0, 1.0 - ca * ca));
        for (int j = 0; j < n_beta; ++j) {
            const double beta = kTwoPi * j / n_beta;
            q.nodes.push_back(Vec3(ca, sa * std::cos(beta), sa * std::sin(beta)));
            q.weights.push_back(0.5 * wt[i] / n_beta);
        }
    }
    return q;
}

double integrate(const std::function<double(const Mat3&)>& f, const SO3Quadrature& q) {
    double sum = 0.0, comp = 0.0;
    for (std::size_t k = 0; k < q.nodes.size(); ++k) {
        const double term = q.weights[k] * f(q.nodes[k]) - comp;
        const double next = sum + term;
        comp = (next - sum) - term;
        sum = next;
    }
    return sum;
}

std::uint64_t Rng::next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }

Mat3 Rng::haar_rotation() {
    const double alpha = std::acos(1.0 - 2.0 * uniform());
    const double beta = uniform(0.0, kTwoPi);
    const double gamma = uniform(0.0, kTwoPi);
    return euler_to_matrix({alpha, beta, gamma}).matrix();
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0x5851f42d4c957f2dULL * (stream + 1)));
    return r.next_u64();
}

Rotation sample_haar(Rng& rng) { return Rotation::from_matrix_unchecked(rng.haar_rotation()); }

}  // namespace lcdft
