#pragma once

// Pullback of a Courant algebroid structure along an injective bundle
// morphism whose base map is a polynomial embedding with a retraction.
// Anchor, metric and bracket of the source are transported through the
// extensions ê = P(r(y)) e(r(y)) and read back along the image.

#include <optional>
#include <string>
#include <vector>

#include "courant/morphisms.hpp"

namespace courant {

struct HypothesisCheck {
  bool passed = true;
  std::string detail;
  std::vector<PolyMap> witness;  // sections or covectors involved, in source variables
  PolyMatrix defect;
};

struct HypothesisReport {
  HypothesisCheck anchor_tangent;
  HypothesisCheck pairing_nondegenerate;
  HypothesisCheck sections_involutive;

  bool all_passed() const {
    return anchor_tangent.passed && pairing_nondegenerate.passed && sections_involutive.passed;
  }
};

/// A failed hypothesis or a representation limit; verification failure, not
/// bad input.
class PullbackError : public Error {
 public:
  PullbackError(const std::string& message, HypothesisReport report)
      : Error(message), report_(std::move(report)) {}
  const HypothesisReport& report() const noexcept { return report_; }

 private:
  HypothesisReport report_;
};

class PullbackProblem {
 public:
  /// Throws InputError when shapes disagree, the retraction is missing, or
  /// P(x) loses column rank at one of the sample points.
  PullbackProblem(CourantStructure ambient, BundleMorphism phi)
      : ambient_(std::move(ambient)), phi_(std::move(phi)) {
    require_same_bundle(ambient_.bundle(), phi_.target(), "pullback ambient");
    if (!phi_.retraction()) throw InputError("pullback needs a retraction of the base map");
    for (const auto& point : sample_points(phi_.source().base_dim)) {
      if (rank(phi_.fiber_matrix().eval(point)) != phi_.source().rank) {
        std::string where;
        for (const auto& q : point) where += (where.empty() ? "" : ", ") + to_string(q);
        throw InputError("fiber matrix is not injective at (" + where + ")");
      }
    }
  }

  const CourantStructure& ambient() const noexcept { return ambient_; }
  const BundleMorphism& morphism() const noexcept { return phi_; }
  const TrivialBundle& source_bundle() const noexcept { return phi_.source(); }
  const PolyMap& retraction() const { return *phi_.retraction(); }

  PullbackProblem with_retraction(PolyMap r) const { return PullbackProblem(ambient_, phi_.with_retraction(std::move(r))); }

  /// Deterministic rational points used as the injectivity witness set.
  static std::vector<std::vector<Rational>> sample_points(std::size_t dim) {
    static const Rational values[] = {0, 1, -1, 2, Rational(1, 2), -3, Rational(-2, 3), 5};
    std::vector<std::vector<Rational>> pts;
    for (std::size_t t = 0; t < 8; ++t) {
      std::vector<Rational> p(dim);
      for (std::size_t i = 0; i < dim; ++i) p[i] = values[(t + 3 * i) % 8];
      pts.push_back(std::move(p));
    }
    return pts;
  }

 private:
  CourantStructure ambient_;
  BundleMorphism phi_;
};

namespace detail {

/// Inverse of a polynomial matrix whose determinant is a nonzero constant.
inline std::optional<PolyMatrix> unimodular_inverse(const PolyMatrix& m) {
  const std::size_t k = m.rows();
  if (m.is_constant()) {
    RationalMatrix c = m.constant_part();
    if (determinant(c) == 0) return std::nullopt;
    return PolyMatrix::from_constant(inverse(c), m.num_vars());
  }
  Polynomial det = determinant(m);
  if (!det.is_constant() || det.is_zero()) return std::nullopt;
  Rational inv_det = 1 / det.constant_term();
  PolyMatrix out(k, k, m.num_vars());
  for (std::size_t r = 0; r < k; ++r)
    for (std::size_t c = 0; c < k; ++c) {
      PolyMatrix minor(k - 1, k - 1, m.num_vars());
      for (std::size_t i = 0, ii = 0; i < k; ++i) {
        if (i == c) continue;
        for (std::size_t j = 0, jj = 0; j < k; ++j)
          if (j != r) minor(ii, jj++) = m(i, j);
        ++ii;
      }
      Polynomial cof = determinant(minor) * inv_det;
      out(r, c) = (r + c) % 2 == 0 ? cof : -cof;
    }
  return out;
}

/// G′ = PᵀGP in source variables.
inline PolyMatrix pulled_metric(const PullbackProblem& p) {
  const PolyMatrix& fiber = p.morphism().fiber_matrix();
  return fiber.transpose() * PolyMatrix::from_constant(p.ambient().metric(), fiber.num_vars()) * fiber;
}

/// Extended frame sections ê_i = P(r(y)) e_i in ambient variables.
inline std::vector<PolyMap> frame_extensions(const PullbackProblem& p) {
  PolyMatrix ext = p.morphism().fiber_matrix().compose(p.retraction());
  std::vector<PolyMap> out;
  for (std::size_t i = 0; i < ext.cols(); ++i) out.push_back(ext.column_map(i));
  return out;
}

/// Coordinates c(x) with P(x) c(x) = w(x), via c = G′⁻¹PᵀG w; nullopt when w
/// leaves the image of P.
inline std::optional<PolyMap> solve_in_image(const PullbackProblem& p, const PolyMatrix& g_inv, const PolyMap& w) {
  const PolyMatrix& fiber = p.morphism().fiber_matrix();
  PolyMap c = g_inv * (fiber.transpose() * (PolyMatrix::from_constant(p.ambient().metric(), fiber.num_vars()) * w));
  if (!(fiber * c - w).is_zero()) return std::nullopt;
  return c;
}

inline PolyMatrix pulled_anchor(const PullbackProblem& p) {
  const auto& phi = p.morphism();
  return jacobian(p.retraction()).compose(phi.base_map()) * p.ambient().anchor().compose(phi.base_map()) *
         phi.fiber_matrix();
}

/// Structure functions from a family of extensions ê_i (ê_i∘φ₀ = P e_i).
inline std::vector<Polynomial> pulled_structure(const PullbackProblem& p, const PolyMatrix& g_inv,
                                                const std::vector<PolyMap>& ext) {
  const std::size_t k = p.source_bundle().rank, n = p.source_bundle().base_dim;
  std::vector<Polynomial> c(k * k * k, Polynomial(n));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      PolyMap v = compose(bracket_raw(p.ambient(), ext[i], ext[j]), p.morphism().base_map());
      auto coords = solve_in_image(p, g_inv, v);
      if (!coords) throw PullbackError("bracket of extended frame sections leaves the image", {});
      for (std::size_t h = 0; h < k; ++h) c[(i * k + j) * k + h] = (*coords)[h];
    }
  return c;
}

}  // namespace detail

/// (a) anchor tangency (I − dφ₀·dr(φ₀))·A(φ₀)·P = 0;
/// (b) G′ = PᵀGP has constant nonzero determinant;
/// (c) involutivity of sections of E taking values in im φ along the image:
///     brackets of the extended frame, brackets against generators v·e_a with
///     v vanishing on the image, and D_ρ(v) along the image, all land in im P.
inline HypothesisReport check_hypotheses(const PullbackProblem& p) {
  const auto& phi = p.morphism();
  const auto& s = p.ambient();
  const PolyMap& base = phi.base_map();
  const std::size_t n_src = p.source_bundle().base_dim, n_amb = s.base_dim(), k = p.source_bundle().rank;
  HypothesisReport rep;

  PolyMatrix proj = jacobian(base) * jacobian(p.retraction()).compose(base);
  PolyMatrix normal = PolyMatrix::identity(n_amb, n_src) - proj;
  PolyMatrix tangency = normal * s.anchor().compose(base) * phi.fiber_matrix();
  if (!tangency.is_zero()) {
    rep.anchor_tangent = {false, "anchor of im(phi) has a component normal to the image", {}, tangency};
  }

  PolyMatrix g_pulled = detail::pulled_metric(p);
  Polynomial det = determinant(g_pulled);
  std::optional<PolyMatrix> g_inv;
  if (det.is_zero()) {
    rep.pairing_nondegenerate = {false, "pulled-back pairing is degenerate (zero determinant)", {}, g_pulled};
  } else if (!det.is_constant()) {
    rep.pairing_nondegenerate = {false, "determinant of the pulled-back pairing is not constant", {},
                                 PolyMatrix::column(detail::scalar_map(det))};
  } else {
    g_inv = detail::unimodular_inverse(g_pulled);
  }

  if (!g_inv) {
    rep.sections_involutive = {false, "undecided: needs a nondegenerate pulled-back pairing", {}, {}};
    return rep;
  }
  auto fail = [&](std::string detail, std::vector<PolyMap> witness, const PolyMap& leak) {
    if (rep.sections_involutive.passed)
      rep.sections_involutive = {false, std::move(detail), std::move(witness), PolyMatrix::column(leak)};
  };
  auto ext = detail::frame_extensions(p);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      PolyMap v = compose(detail::bracket_raw(s, ext[i], ext[j]), base);
      if (!detail::solve_in_image(p, *g_inv, v))
        fail("bracket of extended frame sections " + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                 " leaves im(phi)",
             {ext[i], ext[j]}, v);
    }
  if (k > 0) {
    for (const auto& gen : phi.vanishing_generators()) {
      PolyMap d = compose(detail::d_rho_raw(s, gen), base);
      if (!detail::solve_in_image(p, *g_inv, d))
        fail("D of a function vanishing on the image leaves im(phi)", {detail::scalar_map(gen)}, d);
      for (std::size_t i = 0; i < k; ++i) {
        Polynomial along = compose(detail::derivation(detail::anchor_field(s, ext[i]), gen), base);
        if (!along.is_zero())
          fail("extended frame section " + std::to_string(i + 1) + " moves a function vanishing on the image",
               {ext[i], detail::scalar_map(gen)}, detail::scalar_map(along));
      }
    }
  }
  return rep;
}

/// A′ = dr(φ₀)·A(φ₀)·P, G′ = PᵀGP, P c′_ij = ⟦ê_i,ê_j⟧∘φ₀.
inline CourantStructure construct(const PullbackProblem& p) {
  HypothesisReport rep = check_hypotheses(p);
  if (!rep.all_passed()) throw PullbackError("pullback hypotheses fail", rep);
  PolyMatrix g_pulled = detail::pulled_metric(p);
  if (!g_pulled.is_constant())
    throw PullbackError("pulled-back pairing is not constant; only constant metrics are representable", rep);
  PolyMatrix g_inv = *detail::unimodular_inverse(g_pulled);
  return CourantStructure(p.source_bundle(), detail::pulled_anchor(p), g_pulled.constant_part(),
                          detail::pulled_structure(p, g_inv, detail::frame_extensions(p)));
}

struct WellDefinedness {
  bool passed = true;
  std::size_t perturbations = 0;  // distinct nonzero extension perturbations compared
  std::string detail;
};

/// Compares construct(p) with the construction from the alternative
/// retraction and from extensions ê_i + v·s_i, where v vanishes on the image
/// and s_i are seeded ambient sections.
inline WellDefinedness well_definedness_test(const PullbackProblem& p, const PolyMap& alternative_retraction,
                                             std::size_t perturbations = 3, std::uint64_t seed = 0) {
  WellDefinedness out;
  CourantStructure reference = construct(p);
  if (!(construct(p.with_retraction(alternative_retraction)) == reference)) {
    out.passed = false;
    out.detail = "alternative retraction changes the structure";
    return out;
  }
  auto gens = p.morphism().vanishing_generators();
  if (gens.empty() || p.source_bundle().rank == 0) return out;

  PolyMatrix g_inv = PolyMatrix::from_constant(inverse(reference.metric()), p.source_bundle().base_dim);
  SectionSampler sampler(seed);
  auto base_ext = detail::frame_extensions(p);
  for (std::size_t t = 0; t < perturbations; ++t) {
    auto ext = base_ext;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      Section bump = sampler.section(p.ambient().bundle(), 1);
      ext[i] += gens[(i + t) % gens.size()] * bump.coeffs();
    }
    ++out.perturbations;
    if (detail::pulled_structure(p, g_inv, ext) != reference.structure_functions()) {
      out.passed = false;
      out.detail = "perturbation " + std::to_string(t) + " changes the structure functions";
      return out;
    }
  }
  return out;
}

struct UniquenessVerdict {
  bool matches_construction = false;
  MorphismVerdict morphism;
  bool accepted() const { return matches_construction && morphism.is_morphism; }
};

/// Accepts a candidate iff it equals the constructed structure and φ is a
/// morphism from it to the ambient structure.
inline UniquenessVerdict uniqueness_test(const PullbackProblem& p, const CourantStructure& candidate,
                                         const MorphismOptions& opt = {}) {
  require_same_bundle(p.source_bundle(), candidate.bundle(), "uniqueness candidate");
  UniquenessVerdict v;
  v.matches_construction = candidate == construct(p);
  v.morphism = check_general_base(candidate, p.ambient(), p.morphism(), std::nullopt, opt);
  return v;
}

}  // namespace courant
