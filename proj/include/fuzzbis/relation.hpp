#ifndef FUZZBIS_RELATION_HPP
#define FUZZBIS_RELATION_HPP

#include <span>
#include <string>
#include <vector>

#include "fuzzbis/lattice.hpp"

namespace fuzzbis {

/// Index of `name` in `domain`; throws ValidationError when absent.
std::size_t domain_index(const std::vector<std::string>& domain,
                         const std::string& name);

/// A fuzzy subset of a finite ordered domain.
class FuzzySet {
 public:
  FuzzySet(LatticePtr lattice, std::vector<std::string> domain);

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<std::string>& domain() const { return domain_; }
  std::size_t size() const { return domain_.size(); }

  const Value& at(std::size_t i) const { return values_.at(i); }
  const Value& at(const std::string& name) const;
  void set(std::size_t i, Value v);
  void set(const std::string& name, Value v);
  std::span<const Value> values() const { return values_; }

  bool leq(const FuzzySet& other) const;
  bool eq(const FuzzySet& other) const;

  /// {"u": "9/10", ...}; unlisted entries are 0.
  static FuzzySet from_json(LatticePtr lattice,
                            std::vector<std::string> domain,
                            const nlohmann::json& doc);
  nlohmann::json to_json() const;

 private:
  void check_compatible(const FuzzySet& other) const;
  LatticePtr lattice_;
  std::vector<std::string> domain_;
  std::vector<Value> values_;
};

/// A dense fuzzy relation between two finite ordered domains.
class FuzzyRelation {
 public:
  FuzzyRelation(LatticePtr lattice, std::vector<std::string> rows,
                std::vector<std::string> cols);

  static FuzzyRelation identity(LatticePtr lattice,
                                std::vector<std::string> domain);
  static FuzzyRelation constant(LatticePtr lattice,
                                std::vector<std::string> rows,
                                std::vector<std::string> cols, Value v);

  const LatticePtr& lattice() const { return lattice_; }
  const std::vector<std::string>& rows() const { return rows_; }
  const std::vector<std::string>& cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  const Value& at(std::size_t i, std::size_t j) const {
    return table_.at(i * cols_.size() + j);
  }
  const Value& at(const std::string& r, const std::string& c) const;
  void set(std::size_t i, std::size_t j, Value v);
  void set(const std::string& r, const std::string& c, Value v);

  FuzzyRelation converse() const;
  bool leq(const FuzzyRelation& other) const;
  bool eq(const FuzzyRelation& other) const;
  /// Max pointwise distance, for approximate convergence tests.
  mpq_class sup_norm_distance(const FuzzyRelation& other) const;

  /// {"rows": [...], "cols": [...], "entries": [[row, col, "p/q"], ...]};
  /// omitted entries are 0.
  static FuzzyRelation from_json(LatticePtr lattice, const nlohmann::json& doc);
  nlohmann::json to_json() const;

 private:
  void check_compatible(const FuzzyRelation& other) const;
  LatticePtr lattice_;
  std::vector<std::string> rows_;
  std::vector<std::string> cols_;
  std::vector<Value> table_;
};

/// (R o S)(x,z) = sup_y R(x,y) (x) S(y,z). R's column domain must equal S's
/// row domain.
FuzzyRelation compose(const FuzzyRelation& r, const FuzzyRelation& s);

/// (f o Z)(y) = sup_x f(x) (x) Z(x,y).
FuzzySet compose(const FuzzySet& f, const FuzzyRelation& z);

/// (Z o g)(x) = sup_y Z(x,y) (x) g(y).
FuzzySet compose(const FuzzyRelation& z, const FuzzySet& g);

/// Pointwise sup of a non-empty family over matching domains.
FuzzyRelation sup_relations(std::span<const FuzzyRelation> rs);

bool leq_relations(const FuzzyRelation& r, const FuzzyRelation& s);

struct RelationClassification {
  bool reflexive = false;
  bool symmetric = false;
  bool transitive = false;
  bool equivalence = false;
};

/// Square relations only.
RelationClassification classify(const FuzzyRelation& r);

}  // namespace fuzzbis

#endif  // FUZZBIS_RELATION_HPP
