#pragma once

// Type classification of ITPFI factors from their eigenvalue lists.
//
// Type III is decided by the series sum_n sum_i lambda_{n,i}
// min{|lambda_{n,1}/lambda_{n,i} - 1|^2, C}, which lies between
// kappa * (mass off the top value) and C * (mass off the top value) with
// kappa = min{(gap - 1)^2, C}. Type I is decided by sum_n (1 - lambda_{n,1}):
// when it converges, the projection onto the top eigenvectors is nonzero,
// and its corner is one-dimensional. The III_lambda subdivision and the T
// invariant are estimated numerically and always reported as heuristic.

#include "qgt/itpfi_spec.hpp"
#include "qgt/series.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qgt {

struct FactorType {
  enum class Kind { IFinite, IInf, II1, IIInf, III, Indeterminate };

  Kind kind = Kind::Indeterminate;
  std::uint64_t n = 1;           // I_FINITE(n)
  std::optional<double> lambda;  // III; empty = subtype unknown
  double tolerance = 0;
  bool heuristic = false;
  std::string reason;  // INDETERMINATE

  static FactorType i_finite(std::uint64_t n) { return {Kind::IFinite, n, {}, 0, false, {}}; }
  static FactorType i_inf() { return {Kind::IInf, 1, {}, 0, false, {}}; }
  static FactorType ii_1() { return {Kind::II1, 1, {}, 0, false, {}}; }
  static FactorType ii_inf() { return {Kind::IIInf, 1, {}, 0, false, {}}; }
  static FactorType iii(std::optional<double> lambda = std::nullopt, double tolerance = 0, bool heuristic = true) {
    return {Kind::III, 1, lambda, tolerance, heuristic, {}};
  }
  static FactorType indeterminate(std::string reason) { return {Kind::Indeterminate, 1, {}, 0, false, std::move(reason)}; }

  bool determinate() const { return kind != Kind::Indeterminate; }
  // "I_n", "I_inf", "II_1", "II_inf", "III", "INDETERMINATE".
  std::string family() const;
  std::string str() const;
  friend bool operator==(const FactorType& a, const FactorType& b);
};

struct ClassifierParams {
  Rational C = 1;
  double delta_min = 1e-6;
  double epsilon = 1e-3;
  std::size_t ratio_levels = 16;
  std::vector<double> t_grid;
};

Verdict type_three_test(const ITPFISpec& spec, const ClassifierParams& params = {});
Verdict type_one_test(const ITPFISpec& spec);

struct RatioEstimate {
  std::optional<double> lambda;  // empty = subtype unknown
  double tolerance = 0;
  std::string evidence;
  std::vector<double> persistent;  // ratios seen in at least half the window blocks
  double weight = 0;               // summed larger eigenvalue over matching pairs
  std::size_t blocks = 0;
};

RatioEstimate ratio_set(const ITPFISpec& spec, const ClassifierParams& params = {});

// Probe for t in T(M): sum_n (1 - |sum_i m_{n,i} lambda_{n,i}^(1+it)|).
Verdict t_test(const ITPFISpec& spec, double t);

FactorType tensor_type(const FactorType& a, const FactorType& b);

struct Classification {
  FactorType type;
  std::optional<Verdict> three;
  std::optional<Verdict> one;
  std::optional<RatioEstimate> ratio;
  std::vector<std::string> steps;  // structural reductions applied
};

Classification classify(const ITPFISpec& spec, const ClassifierParams& params = {});

nlohmann::json to_json(const FactorType& type);
nlohmann::json to_json(const Classification& c);

}  // namespace qgt
