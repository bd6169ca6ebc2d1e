#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "hpade/geometry.hpp"
#include "hpade/polynomial.hpp"

namespace hpade {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// numerator / denominator. When the denominator is given by its roots those
/// are kept exactly; otherwise they are computed once with poly_roots.
struct RationalTerm {
  ComplexPolynomial numerator;
  ComplexPolynomial denominator;
  std::vector<cplx> poles;  ///< denominator roots with multiplicity

  RationalTerm(ComplexPolynomial num, ComplexPolynomial den);
  static RationalTerm from_poles(ComplexPolynomial num, std::vector<cplx> poles, cplx lead = 1.0);
};

/// scale * sqrt(branch_at - z). The cut is the ray branch_at + t*cut_direction,
/// t >= 0; cut_direction = 1 is the principal branch.
struct SqrtBranchTerm {
  cplx branch_at;
  cplx scale{1.0};
  cplx cut_direction{1.0};
};

/// scale * log(branch_at - z), same cut convention as SqrtBranchTerm.
struct LogBranchTerm {
  cplx branch_at;
  cplx scale{1.0};
  cplx cut_direction{1.0};
};

/// scale * exp(z).
struct EntireExpTerm {
  cplx scale{1.0};
};

using Term = std::variant<RationalTerm, SqrtBranchTerm, LogBranchTerm, EntireExpTerm>;

enum class SingularityKind { pole, branch_point, logarithmic };

struct Singularity {
  cplx location;
  SingularityKind kind;
  int order = 0;  ///< pole order, 0 for branch points
};

/// Laurent principal part sum_i coeffs[i] (z - location)^{-(i+1)}.
struct PrincipalPart {
  cplx location;
  std::vector<cplx> coeffs;
};

/// One analytic function given as a sum of typed terms, with its singularities
/// derived from the terms. Poles of coinciding rational terms are merged and
/// their orders reflect any cancellation.
class FunctionModel {
 public:
  explicit FunctionModel(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  const std::vector<Singularity>& singularities() const { return singularities_; }
  const std::vector<PrincipalPart>& principal_parts() const { return principal_parts_; }

  /// Throws EvaluationError within 1e-12 of a pole or on a branch cut.
  cplx operator()(cplx z) const;
  cplx evaluate(cplx z) const { return (*this)(z); }

  /// Copy with every branch cut pointing radially away from center.
  FunctionModel with_cuts_away_from(cplx center) const;
  FunctionModel scaled(cplx s) const;

 private:
  std::vector<Term> terms_;
  std::vector<Singularity> singularities_;
  std::vector<PrincipalPart> principal_parts_;
};

/// Functions, multi-index, geometry and node table of one experiment. Branch cuts
/// are re-oriented away from the geometry centre, and every singularity must lie
/// strictly outside E.
class SystemModel {
 public:
  SystemModel(std::vector<FunctionModel> functions, std::vector<int> multi_index, GeometrySpec geometry,
              NodeTable table);

  const std::vector<FunctionModel>& functions() const { return functions_; }
  const std::vector<int>& multi_index() const { return multi_index_; }
  const GeometrySpec& geometry() const { return geometry_; }
  const NodeTable& table() const { return table_; }
  std::size_t dimension() const { return functions_.size(); }
  int total_index() const;

 private:
  std::vector<FunctionModel> functions_;
  std::vector<int> multi_index_;
  GeometrySpec geometry_;
  NodeTable table_;
};

/// Index of the largest canonical domain on which f is holomorphic.
double rho_zero(const FunctionModel& f, const GeometrySpec& g);

/// Index of the largest canonical domain on which f is meromorphic with at most s poles.
double rho_meromorphy(const FunctionModel& f, const GeometrySpec& g, int s);

}  // namespace hpade
