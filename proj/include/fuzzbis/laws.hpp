#ifndef FUZZBIS_LAWS_HPP
#define FUZZBIS_LAWS_HPP

#include <array>
#include <cstdint>
#include <functional>

#include "fuzzbis/lattice.hpp"

namespace fuzzbis {

/// One residuated-lattice law, evaluated on a 5-tuple (x, x', y, y', z).
struct Law {
  std::string name;
  bool heyting_only = false;
  std::function<bool(const Lattice&, const std::array<Value, 5>&)> check;
};

/// The law catalogue: adjunction, monotonicity, distributivity, exchange,
/// transitivity and congruence properties of (x)/->/<=>; two extra laws hold
/// on Heyting algebras only.
const std::vector<Law>& law_catalogue();

struct LawViolation {
  std::string law;
  std::vector<std::string> values;  // printed (x, x', y, y', z)
};

struct LawSuiteReport {
  std::size_t laws_checked = 0;
  std::size_t cases_checked = 0;
  bool exhaustive = false;
  bool heyting_included = false;
  std::vector<LawViolation> violations;

  bool passed() const { return violations.empty(); }
  nlohmann::json to_json() const;
};

/// Checks every applicable law: exhaustively over all 5-tuples on finite
/// carriers (up to a size guard), otherwise on `samples` random rational
/// 5-tuples drawn deterministically from `seed`.
LawSuiteReport run_law_suite(const LatticePtr& lattice,
                             std::size_t samples = 10000,
                             std::uint64_t seed = 0);

}  // namespace fuzzbis

#endif  // FUZZBIS_LAWS_HPP
