#pragma once

#include <cmath>
#include <random>

#include "asg/conformal.hpp"
#include "asg/conics.hpp"
#include "asg/neutral.hpp"

namespace asgtest {

// raw-bit uniform doubles so tests do not depend on libstdc++ distribution
// internals
struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double unit() { return (gen() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * unit(); }
    int pick(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
};

inline asg::Vec4 random_vec4(Rng& rng, double span = 10.0) {
    return asg::Vec4(rng.uniform(-span, span), rng.uniform(-span, span),
                     rng.uniform(-span, span), rng.uniform(-span, span));
}

inline std::array<asg::Vec4, 3> random_skew_triple(Rng& rng, double span = 10.0) {
    while (true) {
        const asg::Vec4 a = random_vec4(rng, span);
        const asg::Vec4 b = random_vec4(rng, span);
        const asg::Vec4 c = random_vec4(rng, span);
        if (asg::are_skew(a, b) && asg::are_skew(a, c) && asg::are_skew(b, c)) {
            return {a, b, c};
        }
    }
}

// non-null seed vector for pseudo-orthonormal completions
inline asg::Vec4 random_nonnull(Rng& rng, double span = 2.0) {
    while (true) {
        const asg::Vec4 v = random_vec4(rng, span);
        if (std::abs(asg::quadratic_form(v)) > 0.2) return v;
    }
}

// random pair built from a pseudo-orthonormal frame so the plane kind is
// chosen exactly
inline asg::ConjugateConicPair random_pair(Rng& rng, bool hyperbolic) {
    const Eigen::Matrix4d basis =
        asg::pseudo_orthonormal_completion(random_nonnull(rng));
    const asg::Vec4 center = random_vec4(rng, 3.0);
    asg::PlaneFrame plane{center, basis.col(0), basis.col(hyperbolic ? 2 : 1)};
    double c2 = rng.uniform(0.2, 4.0);
    if (hyperbolic && rng.unit() < 0.5) c2 = -c2;
    return asg::build_pair(center, plane, c2);
}

inline asg::ConformalMap random_conformal_map(Rng& rng, int max_stages = 4) {
    asg::ConformalMap f;
    const int stages = 1 + rng.pick(max_stages);
    for (int i = 0; i < stages; ++i) {
        switch (rng.pick(5)) {
            case 0: f.generators.push_back(asg::Translation{random_vec4(rng, 2.0)}); break;
            case 1: {
                double factor = rng.uniform(0.5, 2.0);
                if (rng.unit() < 0.5) factor = -factor;
                f.generators.push_back(asg::Dilation{factor});
                break;
            }
            case 2:
                f.generators.push_back(asg::PseudoOrthogonal{
                    asg::pseudo_orthonormal_completion(random_nonnull(rng))});
                break;
            case 3: f.generators.push_back(asg::AntiOrthogonalSwap{}); break;
            default:
                f.generators.push_back(
                    asg::Inversion{random_vec4(rng, 2.0), rng.uniform(0.5, 2.0)});
        }
    }
    return f;
}

// null displacement: u from the positive block, w from the negative block,
// scaled to equal Euclidean size
inline asg::Vec4 random_null_direction(Rng& rng) {
    while (true) {
        Eigen::Vector2d a(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        Eigen::Vector2d b(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
        const double na = a.norm(), nb = b.norm();
        if (na < 1e-3 || nb < 1e-3) continue;
        b *= na / nb;
        return asg::Vec4(a(0), a(1), b(0), b(1));
    }
}

// membership residual of p on one side of a pair: radius defect plus leakage
// into the complementary plane, scale-normalized
inline double pair_membership(const asg::ConjugateConicPair& pair, asg::ConicSide side,
                              const asg::Vec4& p) {
    const asg::Vec4 d = p - pair.center;
    const double scale = std::max(1.0, p.squaredNorm() + pair.center.squaredNorm());
    double res = std::abs(asg::quadratic_form(d) - pair.side_square_radius(side)) / scale;
    const asg::PlaneFrame& other =
        side == asg::ConicSide::S ? pair.coplane : pair.plane;
    res += std::abs(asg::inner(d, other.u)) / scale;
    res += std::abs(asg::inner(d, other.v)) / scale;
    return res;
}

}  // namespace asgtest
