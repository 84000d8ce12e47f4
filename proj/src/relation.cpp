#include "fuzzbis/relation.hpp"

#include <algorithm>

namespace fuzzbis {

std::size_t domain_index(const std::vector<std::string>& domain,
                         const std::string& name) {
  auto it = std::find(domain.begin(), domain.end(), name);
  if (it == domain.end())
    throw ValidationError("unknown state '" + name + "'");
  return static_cast<std::size_t>(it - domain.begin());
}

// ---------------------------------------------------------------------------
// FuzzySet

FuzzySet::FuzzySet(LatticePtr lattice, std::vector<std::string> domain)
    : lattice_(std::move(lattice)), domain_(std::move(domain)) {
  values_.assign(domain_.size(), lattice_->bot());
}

const Value& FuzzySet::at(const std::string& name) const {
  return values_[domain_index(domain_, name)];
}

void FuzzySet::set(std::size_t i, Value v) {
  if (v.carrier_tag() != lattice_->tag())
    throw LatticeError("value does not belong to this set's lattice");
  values_.at(i) = std::move(v);
}

void FuzzySet::set(const std::string& name, Value v) {
  set(domain_index(domain_, name), std::move(v));
}

void FuzzySet::check_compatible(const FuzzySet& other) const {
  if (lattice_->tag() != other.lattice_->tag())
    throw LatticeError("fuzzy sets over different lattices");
  if (domain_ != other.domain_)
    throw ValidationError("fuzzy sets over different domains");
}

bool FuzzySet::leq(const FuzzySet& other) const {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!lattice_->leq(values_[i], other.values_[i])) return false;
  return true;
}

bool FuzzySet::eq(const FuzzySet& other) const {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!lattice_->eq(values_[i], other.values_[i])) return false;
  return true;
}

FuzzySet FuzzySet::from_json(LatticePtr lattice,
                             std::vector<std::string> domain,
                             const nlohmann::json& doc) {
  FuzzySet f(lattice, std::move(domain));
  if (!doc.is_object()) throw ValidationError("fuzzy set must be an object");
  for (const auto& [key, val] : doc.items()) {
    std::string text = val.is_string() ? val.get<std::string>()
                                       : val.dump();
    f.set(key, lattice->parse(text));
  }
  return f;
}

nlohmann::json FuzzySet::to_json() const {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t i = 0; i < domain_.size(); ++i)
    if (!lattice_->eq(values_[i], lattice_->bot()))
      out[domain_[i]] = lattice_->str(values_[i]);
  return out;
}

// ---------------------------------------------------------------------------
// FuzzyRelation

FuzzyRelation::FuzzyRelation(LatticePtr lattice, std::vector<std::string> rows,
                             std::vector<std::string> cols)
    : lattice_(std::move(lattice)),
      rows_(std::move(rows)),
      cols_(std::move(cols)) {
  table_.assign(rows_.size() * cols_.size(), lattice_->bot());
}

FuzzyRelation FuzzyRelation::identity(LatticePtr lattice,
                                      std::vector<std::string> domain) {
  FuzzyRelation r(lattice, domain, domain);
  for (std::size_t i = 0; i < domain.size(); ++i) r.set(i, i, lattice->top());
  return r;
}

FuzzyRelation FuzzyRelation::constant(LatticePtr lattice,
                                      std::vector<std::string> rows,
                                      std::vector<std::string> cols, Value v) {
  FuzzyRelation r(lattice, std::move(rows), std::move(cols));
  for (auto& cell : r.table_) cell = v;
  return r;
}

const Value& FuzzyRelation::at(const std::string& r,
                               const std::string& c) const {
  return at(domain_index(rows_, r), domain_index(cols_, c));
}

void FuzzyRelation::set(std::size_t i, std::size_t j, Value v) {
  if (v.carrier_tag() != lattice_->tag())
    throw LatticeError("value does not belong to this relation's lattice");
  table_.at(i * cols_.size() + j) = std::move(v);
}

void FuzzyRelation::set(const std::string& r, const std::string& c, Value v) {
  set(domain_index(rows_, r), domain_index(cols_, c), std::move(v));
}

FuzzyRelation FuzzyRelation::converse() const {
  FuzzyRelation out(lattice_, cols_, rows_);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < cols_.size(); ++j) out.set(j, i, at(i, j));
  return out;
}

void FuzzyRelation::check_compatible(const FuzzyRelation& other) const {
  if (lattice_->tag() != other.lattice_->tag())
    throw LatticeError("relations over different lattices");
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw ValidationError("relations over different domains");
}

bool FuzzyRelation::leq(const FuzzyRelation& other) const {
  check_compatible(other);
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (!lattice_->leq(table_[i], other.table_[i])) return false;
  return true;
}

bool FuzzyRelation::eq(const FuzzyRelation& other) const {
  check_compatible(other);
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (!lattice_->eq(table_[i], other.table_[i])) return false;
  return true;
}

mpq_class FuzzyRelation::sup_norm_distance(const FuzzyRelation& other) const {
  check_compatible(other);
  mpq_class d(0);
  for (std::size_t i = 0; i < table_.size(); ++i)
    d = std::max(d, lattice_->distance(table_[i], other.table_[i]));
  return d;
}

FuzzyRelation FuzzyRelation::from_json(LatticePtr lattice,
                                       const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("rows") || !doc.contains("cols"))
    throw ValidationError("relation document needs 'rows' and 'cols'");
  std::vector<std::string> rows = doc.at("rows").get<std::vector<std::string>>();
  std::vector<std::string> cols = doc.at("cols").get<std::vector<std::string>>();
  FuzzyRelation r(lattice, std::move(rows), std::move(cols));
  for (const auto& entry : doc.value("entries", nlohmann::json::array())) {
    if (!entry.is_array() || entry.size() != 3)
      throw ValidationError("relation entry must be [row, col, value]");
    std::string text = entry[2].is_string() ? entry[2].get<std::string>()
                                            : entry[2].dump();
    r.set(entry[0].get<std::string>(), entry[1].get<std::string>(),
          lattice->parse(text));
  }
  return r;
}

nlohmann::json FuzzyRelation::to_json() const {
  nlohmann::json out;
  out["rows"] = rows_;
  out["cols"] = cols_;
  auto entries = nlohmann::json::array();
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (std::size_t j = 0; j < cols_.size(); ++j)
      if (!lattice_->eq(at(i, j), lattice_->bot()))
        entries.push_back({rows_[i], cols_[j], lattice_->str(at(i, j))});
  out["entries"] = std::move(entries);
  return out;
}

// ---------------------------------------------------------------------------
// Free operations

FuzzyRelation compose(const FuzzyRelation& r, const FuzzyRelation& s) {
  if (r.lattice()->tag() != s.lattice()->tag())
    throw LatticeError("composing relations over different lattices");
  if (r.cols() != s.rows())
    throw ValidationError("composition domain mismatch");
  const auto& lat = r.lattice();
  FuzzyRelation out(lat, r.rows(), s.cols());
  for (std::size_t i = 0; i < r.rows().size(); ++i)
    for (std::size_t k = 0; k < s.cols().size(); ++k) {
      Value acc = lat->bot();
      for (std::size_t j = 0; j < r.cols().size(); ++j)
        acc = lat->join(acc, lat->tnorm(r.at(i, j), s.at(j, k)));
      out.set(i, k, acc);
    }
  return out;
}

FuzzySet compose(const FuzzySet& f, const FuzzyRelation& z) {
  if (f.lattice()->tag() != z.lattice()->tag())
    throw LatticeError("composing over different lattices");
  if (f.domain() != z.rows()) throw ValidationError("domain mismatch");
  const auto& lat = f.lattice();
  FuzzySet out(lat, z.cols());
  for (std::size_t j = 0; j < z.cols().size(); ++j) {
    Value acc = lat->bot();
    for (std::size_t i = 0; i < f.size(); ++i)
      acc = lat->join(acc, lat->tnorm(f.at(i), z.at(i, j)));
    out.set(j, acc);
  }
  return out;
}

FuzzySet compose(const FuzzyRelation& z, const FuzzySet& g) {
  if (g.lattice()->tag() != z.lattice()->tag())
    throw LatticeError("composing over different lattices");
  if (g.domain() != z.cols()) throw ValidationError("domain mismatch");
  const auto& lat = g.lattice();
  FuzzySet out(lat, z.rows());
  for (std::size_t i = 0; i < z.rows().size(); ++i) {
    Value acc = lat->bot();
    for (std::size_t j = 0; j < g.size(); ++j)
      acc = lat->join(acc, lat->tnorm(z.at(i, j), g.at(j)));
    out.set(i, acc);
  }
  return out;
}

FuzzyRelation sup_relations(std::span<const FuzzyRelation> rs) {
  if (rs.empty()) throw ValidationError("sup of an empty relation family");
  FuzzyRelation out = rs[0];
  const auto& lat = out.lattice();
  for (std::size_t k = 1; k < rs.size(); ++k) {
    if (rs[k].lattice()->tag() != lat->tag())
      throw LatticeError("sup of relations over different lattices");
    if (rs[k].rows() != out.rows() || rs[k].cols() != out.cols())
      throw ValidationError("sup of relations over different domains");
    for (std::size_t i = 0; i < out.rows().size(); ++i)
      for (std::size_t j = 0; j < out.cols().size(); ++j)
        out.set(i, j, lat->join(out.at(i, j), rs[k].at(i, j)));
  }
  return out;
}

bool leq_relations(const FuzzyRelation& r, const FuzzyRelation& s) {
  return r.leq(s);
}

RelationClassification classify(const FuzzyRelation& r) {
  if (!r.square())
    throw ValidationError("classification needs a square relation");
  const auto& lat = r.lattice();
  std::size_t n = r.rows().size();
  RelationClassification c;
  c.reflexive = true;
  c.symmetric = true;
  c.transitive = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!lat->eq(r.at(i, i), lat->top())) c.reflexive = false;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!lat->eq(r.at(i, j), r.at(j, i))) c.symmetric = false;
  for (std::size_t i = 0; i < n && c.transitive; ++i)
    for (std::size_t j = 0; j < n && c.transitive; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!lat->leq(lat->tnorm(r.at(i, j), r.at(j, k)), r.at(i, k))) {
          c.transitive = false;
          break;
        }
  c.equivalence = c.reflexive && c.symmetric && c.transitive;
  return c;
}

}  // namespace fuzzbis
