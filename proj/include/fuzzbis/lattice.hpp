#ifndef FUZZBIS_LATTICE_HPP
#define FUZZBIS_LATTICE_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace fuzzbis {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural misuse: mixing carriers, mismatched domains.
class LatticeError : public Error {
 public:
  using Error::Error;
};

/// Bad input documents: malformed values, dangling state names, invalid tables.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

/// Parses "p/q", decimal ("0.56") or integer ("1") text to an exact rational.
mpq_class parse_rational(const std::string& text);

/// Renders a rational as "p/q" (or "p" when the denominator is 1).
std::string rational_to_string(const mpq_class& q);

class Value;
/// Renders a value through its owning (interned) lattice.
std::string to_string(const Value& v);

enum class TnormKind { Godel, Lukasiewicz, Product, Table };

class Lattice;
using LatticePtr = std::shared_ptr<const Lattice>;

/// An element of one specific lattice carrier. Unit-interval carriers hold an
/// exact rational in lowest terms; finite carriers hold an element index.
/// Values carry the tag of their owning lattice and can only be combined
/// through that lattice's operations.
class Value {
 public:
  Value() = default;

  bool finite_carrier() const { return finite_; }
  const mpq_class& rational() const;
  std::size_t index() const;
  std::uint32_t carrier_tag() const { return tag_; }

  /// Same carrier and same payload.
  bool identical(const Value& other) const;

 private:
  friend class Lattice;
  Value(std::uint32_t tag, mpq_class q) : q_(std::move(q)), tag_(tag) {}
  Value(std::uint32_t tag, std::size_t idx)
      : idx_(idx), tag_(tag), finite_(true) {}

  mpq_class q_{0};
  std::size_t idx_ = 0;
  std::uint32_t tag_ = 0;
  bool finite_ = false;
};

/// A residuated lattice: carrier, order, meet/join, t-norm, residuum and the
/// derived biresiduum. Built-in unit-interval carriers use exact rational
/// arithmetic; finite carriers are table-driven and validated exhaustively at
/// construction (lattice axioms, monoid axioms, adjunction).
///
/// Instances are immutable after construction and freely shareable across
/// threads. Built-in and table lattices are interned, so loading the same
/// lattice twice yields the same instance (and hence compatible values).
class Lattice : public std::enable_shared_from_this<Lattice> {
 public:
  static LatticePtr godel();
  static LatticePtr lukasiewicz();
  static LatticePtr product();
  /// Finite chain 0 < 1 < ... < n-1 with the min t-norm; element names are
  /// "0".."n-1". Requires n >= 2.
  static LatticePtr chain(std::size_t n);
  /// Table-defined finite lattice:
  ///   { "elements": [...], "leq": [[0/1,...],...], "tnorm": [[elem,...],...] }
  /// tnorm cells may be element names or indices. The residuum is derived as
  /// max{z | z (x) x <= y} and the adjunction is checked exhaustively.
  static LatticePtr from_json(const nlohmann::json& doc);
  /// "godel" | "lukasiewicz" | "product" | "chain:<n>".
  static LatticePtr by_name(const std::string& name);
  /// Accepts a builtin name string or an inline table document.
  static LatticePtr from_spec(const nlohmann::json& name_or_doc);
  /// Looks up an interned lattice by its carrier tag.
  static LatticePtr by_tag(std::uint32_t tag);

  const std::string& name() const { return name_; }
  TnormKind tnorm_kind() const { return kind_; }
  bool is_finite() const { return finite_; }
  bool is_linear() const { return linear_; }
  bool is_heyting() const { return heyting_; }
  /// x (x) inf(Y) == inf{x (x) y} for finite Y. Holds for all built-in unit
  /// carriers; checked exhaustively for table carriers.
  bool is_continuous() const { return continuous_; }
  std::size_t size() const;
  const std::vector<std::string>& elements() const { return element_names_; }
  std::uint32_t tag() const { return tag_; }

  Value bot() const;
  Value top() const;
  /// Unit-interval carriers only; q must lie in [0,1].
  Value make(const mpq_class& q) const;
  Value element(const std::string& name) const;
  Value element_at(std::size_t idx) const;
  /// Parses "p/q" / decimal text (unit carriers) or an element name (finite).
  Value parse(const std::string& text) const;
  std::string str(const Value& v) const;

  bool leq(const Value& a, const Value& b) const;
  bool eq(const Value& a, const Value& b) const;
  Value meet(const Value& a, const Value& b) const;
  Value join(const Value& a, const Value& b) const;
  Value tnorm(const Value& a, const Value& b) const;
  Value residuum(const Value& a, const Value& b) const;
  Value biresiduum(const Value& a, const Value& b) const;

  /// inf of a finite set; inf({}) = 1 by the bounded-lattice convention.
  Value inf(std::span<const Value> values) const;
  /// sup of a finite set; sup({}) = 0.
  Value sup(std::span<const Value> values) const;

  /// For approximate solvers on unit carriers: |a - b| as a rational.
  /// Finite carriers report 0 when equal and 1 otherwise.
  mpq_class distance(const Value& a, const Value& b) const;

 private:
  Lattice() = default;
  void check(const Value& v) const;
  std::size_t table_at(const std::vector<std::size_t>& t, std::size_t i,
                       std::size_t j) const {
    return t[i * element_names_.size() + j];
  }
  void derive_finite_structure();  // meet/join/residuum tables + flags
  void validate_finite() const;

  std::string name_;
  TnormKind kind_ = TnormKind::Godel;
  bool finite_ = false;
  bool linear_ = true;
  bool heyting_ = false;
  bool continuous_ = true;
  std::uint32_t tag_ = 0;

  // Finite carriers only.
  std::vector<std::string> element_names_;
  std::vector<bool> leq_;
  std::vector<std::size_t> tnorm_table_;
  std::vector<std::size_t> meet_table_;
  std::vector<std::size_t> join_table_;
  std::vector<std::size_t> residuum_table_;
  std::size_t bot_idx_ = 0;
  std::size_t top_idx_ = 0;
};

}  // namespace fuzzbis

#endif  // FUZZBIS_LATTICE_HPP
