#include "asg/conformal.hpp"

#include <algorithm>
#include <cmath>

namespace asg {

namespace {

// Conformal transformations are evaluated through the classical linear
// representation on the null cone of R^{3,3}: a finite point x embeds as the
// ray (x, 1, Q(x)) under the pairing B((x,a,b),(y,c,d)) = <x,y> - (ad+bc)/2,
// and every generator acts as a 6x6 matrix preserving B up to sign. Composite
// maps whose intermediate stages pass through the cone at infinity stay exact
// here, where the stage-by-stage point chase would collapse; the projective
// weight also yields the conformal factor directly (factor = 1/|weight|).
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

Vec6 embed(const Vec4& x) {
    Vec6 v;
    v << x, 1.0, quadratic_form(x);
    return v;
}

Vec6 embed(const ExtendedPoint& p) {
    if (!p.infinite) return embed(p.p);
    Vec6 v = Vec6::Zero();
    v(5) = 1.0;  // canonical ray of the cone at infinity
    return v;
}

Mat6 translation_matrix(const Vec4& t) {
    Mat6 m = Mat6::Identity();
    m.block<4, 1>(0, 4) = t;
    m.block<1, 4>(5, 0) = 2.0 * (signature_matrix() * t).transpose();
    m(5, 4) = quadratic_form(t);
    return m;
}

Mat6 generator_matrix(const ConformalGenerator& g) {
    return std::visit(
        [](const auto& gen) -> Mat6 {
            using T = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<T, Translation>) {
                return translation_matrix(gen.offset);
            } else if constexpr (std::is_same_v<T, Dilation>) {
                Mat6 m = Mat6::Identity();
                m(4, 4) = 1.0 / gen.factor;
                m(5, 5) = gen.factor;
                return m;
            } else if constexpr (std::is_same_v<T, PseudoOrthogonal>) {
                Mat6 m = Mat6::Identity();
                m.block<4, 4>(0, 0) = gen.m;
                return m;
            } else if constexpr (std::is_same_v<T, AntiOrthogonalSwap>) {
                Mat6 m = Mat6::Zero();
                m(0, 2) = m(1, 3) = m(2, 0) = m(3, 1) = 1.0;
                m(4, 4) = 1.0;
                m(5, 5) = -1.0;  // the swap negates Q
                return m;
            } else {
                static_assert(std::is_same_v<T, Inversion>);
                Mat6 io = Mat6::Identity();  // inversion about the origin
                io(4, 4) = io(5, 5) = 0.0;
                io(4, 5) = 1.0 / gen.k;
                io(5, 4) = gen.k;
                return translation_matrix(gen.center) * io *
                       translation_matrix(Vec4(-gen.center));
            }
        },
        g);
}

struct RayTrace {
    Vec6 ray;            // current representative, renormalized per stage
    double log_scale;    // accumulated log of the renormalizations
    int first_dip = -1;  // first stage whose image weight fell below tolerance
};

RayTrace trace(const ConformalMap& f, const ExtendedPoint& p) {
    RayTrace t{embed(p), 0.0, -1};
    const double n0 = t.ray.cwiseAbs().maxCoeff();
    t.ray /= n0;
    t.log_scale = std::log(n0);
    for (size_t i = 0; i < f.generators.size(); ++i) {
        t.ray = generator_matrix(f.generators[i]) * t.ray;
        const double n = t.ray.cwiseAbs().maxCoeff();
        t.ray /= n;
        t.log_scale += std::log(n);
        if (t.first_dip < 0 && std::abs(t.ray(4)) <= kNullEps) {
            t.first_dip = static_cast<int>(i);
        }
    }
    return t;
}

ConformalGenerator invert_one(const ConformalGenerator& g) {
    return std::visit(
        [](const auto& gen) -> ConformalGenerator {
            using T = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<T, Translation>) {
                return Translation{Vec4(-gen.offset)};
            } else if constexpr (std::is_same_v<T, Dilation>) {
                return Dilation{1.0 / gen.factor};
            } else if constexpr (std::is_same_v<T, PseudoOrthogonal>) {
                // M^T J M = J  =>  M^{-1} = J M^T J
                return PseudoOrthogonal{Eigen::Matrix4d(
                    signature_matrix() * gen.m.transpose() * signature_matrix())};
            } else if constexpr (std::is_same_v<T, AntiOrthogonalSwap>) {
                return gen;  // involution
            } else {
                static_assert(std::is_same_v<T, Inversion>);
                return gen;  // involution
            }
        },
        g);
}

}  // namespace

const char* generator_name(const ConformalGenerator& g) {
    return std::visit(
        [](const auto& gen) -> const char* {
            using T = std::decay_t<decltype(gen)>;
            if constexpr (std::is_same_v<T, Translation>) return "translation";
            else if constexpr (std::is_same_v<T, Dilation>) return "dilation";
            else if constexpr (std::is_same_v<T, PseudoOrthogonal>) return "pseudo-orthogonal";
            else if constexpr (std::is_same_v<T, AntiOrthogonalSwap>) return "anti-orthogonal-swap";
            else return "inversion";
        },
        g);
}

ConformalMap ConformalMap::then(const ConformalMap& next) const {
    ConformalMap out = *this;
    out.generators.insert(out.generators.end(), next.generators.begin(),
                          next.generators.end());
    return out;
}

ConformalMap ConformalMap::inverse() const {
    ConformalMap out;
    out.generators.reserve(generators.size());
    for (auto it = generators.rbegin(); it != generators.rend(); ++it) {
        out.generators.push_back(invert_one(*it));
    }
    return out;
}

ExtendedPoint apply(const ConformalMap& f, const ExtendedPoint& p) {
    const RayTrace t = trace(f, p);
    if (std::abs(t.ray(4)) <= kNullEps) return ExtendedPoint::infinity();
    return ExtendedPoint(Vec4(t.ray.head<4>() / t.ray(4)));
}

double conformal_factor(const ConformalMap& f, const Vec4& p) {
    const RayTrace t = trace(f, p);
    if (std::abs(t.ray(4)) <= kNullEps) {
        throw PoleAt(t.first_dip >= 0 ? t.first_dip
                                      : static_cast<int>(f.generators.size()) - 1);
    }
    // the image representative is weight * (f(p), 1, Q(f(p)))
    return std::exp(-t.log_scale - std::log(std::abs(t.ray(4))));
}

Eigen::Matrix4d pseudo_orthonormal_completion(const Vec4& w) {
    const double qw = quadratic_form(w);
    const double scale = std::max(1.0, w.squaredNorm());
    if (std::abs(qw) <= kNullEps * scale) throw FrameCompletionFailure("null seed");

    std::vector<Vec4> basis;
    std::vector<int> signs;
    basis.push_back(w / std::sqrt(std::abs(qw)));
    signs.push_back(qw > 0 ? 1 : -1);

    auto project_out = [&](Vec4 x) {
        for (size_t j = 0; j < basis.size(); ++j) {
            x -= signs[j] * inner(x, basis[j]) * basis[j];
        }
        return x;
    };

    while (basis.size() < 4) {
        // candidates: projected canonical directions plus their pairwise
        // sums/differences (a null pair can still combine to non-null)
        std::vector<Vec4> cands;
        for (int i = 0; i < 4; ++i) cands.push_back(project_out(Vec4::Unit(i)));
        const size_t n = cands.size();
        for (size_t a = 0; a < n; ++a) {
            for (size_t b = a + 1; b < n; ++b) {
                cands.push_back(cands[a] + cands[b]);
                cands.push_back(cands[a] - cands[b]);
            }
        }
        double best = 0.0;
        Vec4 pick = Vec4::Zero();
        for (const Vec4& c : cands) {
            const double nn = c.squaredNorm();
            if (nn < 1e-14) continue;
            const double r = std::abs(quadratic_form(c)) / nn;
            if (r > best) {
                best = r;
                pick = c;
            }
        }
        if (best <= kNullEps) throw FrameCompletionFailure("cannot extend basis");
        const double q = quadratic_form(pick);
        basis.push_back(pick / std::sqrt(std::abs(q)));
        signs.push_back(q > 0 ? 1 : -1);
    }

    // order columns (+ + - -), keeping the seed in the slot its sign demands
    Eigen::Matrix4d m;
    std::vector<int> pos, neg;
    for (int i = 0; i < 4; ++i) (signs[i] > 0 ? pos : neg).push_back(i);
    if (pos.size() != 2 || neg.size() != 2) throw FrameCompletionFailure("signature drift");
    auto& own = signs[0] > 0 ? pos : neg;
    if (own[0] != 0) std::swap(own[0], own[1]);
    m.col(0) = basis[pos[0]];
    m.col(1) = basis[pos[1]];
    m.col(2) = basis[neg[0]];
    m.col(3) = basis[neg[1]];
    return m;
}

ConformalMap map_triple_to_standard(const Vec4& q, const Vec4& q1, const Vec4& q2) {
    if (!are_skew(q, q1) || !are_skew(q, q2) || !are_skew(q1, q2)) throw NotSkew();

    ConformalMap f;
    f.generators.push_back(Translation{Vec4(-q)});
    const Vec4 a = q1 - q;
    // hypersphere centered at a through 0: fixes 0, sends a to infinity
    f.generators.push_back(Inversion{a, quadratic_form(a)});

    ExtendedPoint b = apply(f, ExtendedPoint(q2));
    if (b.infinite) throw FrameCompletionFailure("third point fell on the pole cone");
    const double qb = quadratic_form(b.p);
    if (std::abs(qb) <= kNullEps * std::max(1.0, b.p.squaredNorm())) {
        throw FrameCompletionFailure("third point image is numerically null");
    }
    f.generators.push_back(Dilation{1.0 / std::sqrt(std::abs(qb))});

    const Vec4 unit = b.p / std::sqrt(std::abs(qb));
    const Eigen::Matrix4d basis = pseudo_orthonormal_completion(unit);
    const Eigen::Matrix4d inv =
        signature_matrix() * basis.transpose() * signature_matrix();
    f.generators.push_back(PseudoOrthogonal{inv});  // sends unit to e1 or e3
    if (qb < 0) f.generators.push_back(AntiOrthogonalSwap{});  // e3 -> e1
    return f;
}

namespace {

std::array<Vec4, 3> perp_triple(const ConjugateConicPair& pair) {
    if (pair.hyperbolic()) {
        return {pair.point(ConicSide::Sperp, -1.0, Branch::Plus),
                pair.point(ConicSide::Sperp, 0.3, Branch::Plus),
                pair.point(ConicSide::Sperp, 1.4, Branch::Plus)};
    }
    return {pair.point(ConicSide::Sperp, 0.5), pair.point(ConicSide::Sperp, 2.5),
            pair.point(ConicSide::Sperp, 4.5)};
}

}  // namespace

ConformalMap map_pair_to_pair(const ConjugateConicPair& source,
                              const ConjugateConicPair& target) {
    const auto sp = perp_triple(source);
    const auto tp = perp_triple(target);
    const ConformalMap gs = map_triple_to_standard(sp[0], sp[1], sp[2]);
    const ConformalMap gt = map_triple_to_standard(tp[0], tp[1], tp[2]);
    return gs.then(gt.inverse());
}

}  // namespace asg
