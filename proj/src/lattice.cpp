#include "fuzzbis/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>

namespace fuzzbis {

namespace {

std::uint32_t next_tag() {
  static std::atomic<std::uint32_t> counter{1};
  return counter.fetch_add(1);
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::uint32_t, std::weak_ptr<const Lattice>>& tag_registry() {
  static std::map<std::uint32_t, std::weak_ptr<const Lattice>> reg;
  return reg;
}

}  // namespace

static void register_lattice(const LatticePtr& l);

static void register_lattice(const LatticePtr& l) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  tag_registry()[l->tag()] = l;
}

LatticePtr Lattice::by_tag(std::uint32_t tag) {
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = tag_registry().find(tag);
  if (it == tag_registry().end())
    throw LatticeError("no lattice interned under this carrier tag");
  auto p = it->second.lock();
  if (!p) throw LatticeError("lattice for this carrier tag was destroyed");
  return p;
}

std::string to_string(const Value& v) {
  return Lattice::by_tag(v.carrier_tag())->str(v);
}

mpq_class parse_rational(const std::string& text) {
  if (text.empty()) throw ValidationError("empty rational literal");
  std::string s = text;
  auto bad = [&] {
    throw ValidationError("malformed rational literal: '" + text + "'");
  };
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '/' && c != '.')
      bad();
  auto slash = s.find('/');
  auto dot = s.find('.');
  if (slash != std::string::npos && dot != std::string::npos) bad();
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (num.empty() || den.empty() || den.find('/') != std::string::npos) bad();
    mpz_class denz(den);
    if (denz == 0) bad();
    mpq_class q{mpz_class(num), denz};
    q.canonicalize();
    return q;
  }
  if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    if (fp.empty() || fp.find('.') != std::string::npos) bad();
    if (ip.empty()) ip = "0";
    mpz_class den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    mpq_class q(mpz_class(ip) * den + mpz_class(fp), den);
    q.canonicalize();
    return q;
  }
  return mpq_class(mpz_class(s));
}

std::string rational_to_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

const mpq_class& Value::rational() const {
  if (finite_) throw LatticeError("value belongs to a finite carrier");
  return q_;
}

std::size_t Value::index() const {
  if (!finite_) throw LatticeError("value belongs to a unit-interval carrier");
  return idx_;
}

bool Value::identical(const Value& other) const {
  if (tag_ != other.tag_) return false;
  return finite_ ? idx_ == other.idx_ : q_ == other.q_;
}

// ---------------------------------------------------------------------------
// Construction

LatticePtr Lattice::godel() {
  static LatticePtr instance = [] {
    auto l = std::shared_ptr<Lattice>(new Lattice());
    l->name_ = "godel";
    l->kind_ = TnormKind::Godel;
    l->heyting_ = true;
    l->tag_ = next_tag();
    LatticePtr p(l);
    register_lattice(p);
    return p;
  }();
  return instance;
}

LatticePtr Lattice::lukasiewicz() {
  static LatticePtr instance = [] {
    auto l = std::shared_ptr<Lattice>(new Lattice());
    l->name_ = "lukasiewicz";
    l->kind_ = TnormKind::Lukasiewicz;
    l->tag_ = next_tag();
    LatticePtr p(l);
    register_lattice(p);
    return p;
  }();
  return instance;
}

LatticePtr Lattice::product() {
  static LatticePtr instance = [] {
    auto l = std::shared_ptr<Lattice>(new Lattice());
    l->name_ = "product";
    l->kind_ = TnormKind::Product;
    l->tag_ = next_tag();
    LatticePtr p(l);
    register_lattice(p);
    return p;
  }();
  return instance;
}

LatticePtr Lattice::chain(std::size_t n) {
  if (n < 2) throw ValidationError("a chain lattice needs at least 2 elements");
  static std::map<std::size_t, LatticePtr> cache;
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  auto l = std::shared_ptr<Lattice>(new Lattice());
  l->name_ = "chain:" + std::to_string(n);
  l->kind_ = TnormKind::Table;
  l->finite_ = true;
  for (std::size_t i = 0; i < n; ++i)
    l->element_names_.push_back(std::to_string(i));
  l->leq_.assign(n * n, false);
  l->tnorm_table_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      l->leq_[i * n + j] = i <= j;
      l->tnorm_table_[i * n + j] = std::min(i, j);
    }
  l->derive_finite_structure();
  l->validate_finite();
  l->tag_ = next_tag();
  LatticePtr ptr(l);
  tag_registry()[ptr->tag()] = ptr;
  cache.emplace(n, ptr);
  return ptr;
}

LatticePtr Lattice::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("elements") || !doc.contains("leq") ||
      !doc.contains("tnorm"))
    throw ValidationError(
        "lattice document needs 'elements', 'leq' and 'tnorm'");

  static std::map<std::string, LatticePtr> cache;
  std::string key = doc.dump();
  {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  auto l = std::shared_ptr<Lattice>(new Lattice());
  l->kind_ = TnormKind::Table;
  l->finite_ = true;
  for (const auto& e : doc.at("elements"))
    l->element_names_.push_back(e.get<std::string>());
  std::size_t n = l->element_names_.size();
  if (n < 2) throw ValidationError("lattice needs at least 2 elements");
  {
    std::vector<std::string> sorted = l->element_names_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError("duplicate lattice element name");
  }
  l->name_ = doc.value("name", "table");

  const auto& leq = doc.at("leq");
  const auto& tnorm = doc.at("tnorm");
  if (leq.size() != n || tnorm.size() != n)
    throw ValidationError("leq/tnorm tables must be " + std::to_string(n) +
                          "x" + std::to_string(n));
  l->leq_.assign(n * n, false);
  l->tnorm_table_.assign(n * n, 0);
  auto elem_index = [&](const nlohmann::json& cell) -> std::size_t {
    if (cell.is_number_unsigned()) {
      auto i = cell.get<std::size_t>();
      if (i >= n) throw ValidationError("tnorm index out of range");
      return i;
    }
    auto name = cell.get<std::string>();
    auto it = std::find(l->element_names_.begin(), l->element_names_.end(),
                        name);
    if (it == l->element_names_.end())
      throw ValidationError("unknown lattice element '" + name + "'");
    return static_cast<std::size_t>(it - l->element_names_.begin());
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (leq[i].size() != n || tnorm[i].size() != n)
      throw ValidationError("ragged lattice table row");
    for (std::size_t j = 0; j < n; ++j) {
      l->leq_[i * n + j] = leq[i][j].get<int>() != 0;
      l->tnorm_table_[i * n + j] = elem_index(tnorm[i][j]);
    }
  }
  l->derive_finite_structure();
  l->validate_finite();
  l->tag_ = next_tag();
  LatticePtr ptr(l);
  std::lock_guard<std::mutex> lock(registry_mutex());
  auto [it, inserted] = cache.emplace(key, ptr);
  tag_registry()[it->second->tag()] = it->second;
  return it->second;
}

LatticePtr Lattice::by_name(const std::string& name) {
  if (name == "godel") return godel();
  if (name == "lukasiewicz") return lukasiewicz();
  if (name == "product") return product();
  if (name.rfind("chain:", 0) == 0) {
    std::size_t n = 0;
    try {
      n = std::stoul(name.substr(6));
    } catch (const std::exception&) {
      throw ValidationError("bad chain size in '" + name + "'");
    }
    return chain(n);
  }
  throw ValidationError("unknown lattice '" + name + "'");
}

LatticePtr Lattice::from_spec(const nlohmann::json& name_or_doc) {
  if (name_or_doc.is_string()) return by_name(name_or_doc.get<std::string>());
  return from_json(name_or_doc);
}

void Lattice::derive_finite_structure() {
  std::size_t n = element_names_.size();
  // Bounds.
  bool found_bot = false, found_top = false;
  for (std::size_t i = 0; i < n; ++i) {
    bool is_bot = true, is_top = true;
    for (std::size_t j = 0; j < n; ++j) {
      if (!leq_[i * n + j]) is_bot = false;
      if (!leq_[j * n + i]) is_top = false;
    }
    if (is_bot) {
      bot_idx_ = i;
      found_bot = true;
    }
    if (is_top) {
      top_idx_ = i;
      found_top = true;
    }
  }
  if (!found_bot || !found_top)
    throw ValidationError("lattice table lacks a least or greatest element");

  // Order axioms.
  for (std::size_t i = 0; i < n; ++i) {
    if (!leq_[i * n + i]) throw ValidationError("leq table is not reflexive");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && leq_[i * n + j] && leq_[j * n + i])
        throw ValidationError("leq table is not antisymmetric");
      for (std::size_t k = 0; k < n; ++k)
        if (leq_[i * n + j] && leq_[j * n + k] && !leq_[i * n + k])
          throw ValidationError("leq table is not transitive");
    }
  }

  // Meets and joins must exist for a lattice.
  meet_table_.assign(n * n, 0);
  join_table_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool have_meet = false, have_join = false;
      for (std::size_t k = 0; k < n; ++k) {
        if (leq_[k * n + i] && leq_[k * n + j]) {
          bool greatest = true;
          for (std::size_t m = 0; m < n; ++m)
            if (leq_[m * n + i] && leq_[m * n + j] && !leq_[m * n + k])
              greatest = false;
          if (greatest) {
            meet_table_[i * n + j] = k;
            have_meet = true;
          }
        }
        if (leq_[i * n + k] && leq_[j * n + k]) {
          bool least = true;
          for (std::size_t m = 0; m < n; ++m)
            if (leq_[i * n + m] && leq_[j * n + m] && !leq_[k * n + m])
              least = false;
          if (least) {
            join_table_[i * n + j] = k;
            have_join = true;
          }
        }
      }
      if (!have_meet || !have_join)
        throw ValidationError("poset is not a lattice (missing meet or join)");
    }

  // Residuum: x -> y = join of {z | z (x) x <= y}. Existence of the maximum
  // (not just the join) is what the adjunction check below verifies.
  residuum_table_.assign(n * n, 0);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      std::size_t r = bot_idx_;
      bool any = false;
      for (std::size_t z = 0; z < n; ++z)
        if (leq_[tnorm_table_[z * n + x] * n + y]) {
          r = any ? join_table_[r * n + z] : z;
          any = true;
        }
      if (!any)
        throw ValidationError("no residuum candidate (0 (x) x <= y failed?)");
      residuum_table_[x * n + y] = r;
    }

  linear_ = true;
  for (std::size_t i = 0; i < n && linear_; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (!leq_[i * n + j] && !leq_[j * n + i]) {
        linear_ = false;
        break;
      }
  heyting_ = tnorm_table_ == meet_table_;

  continuous_ = true;
  for (std::size_t x = 0; x < n && continuous_; ++x)
    for (std::size_t a = 0; a < n && continuous_; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t lhs = tnorm_table_[x * n + meet_table_[a * n + b]];
        std::size_t rhs = meet_table_[tnorm_table_[x * n + a] * n +
                                      tnorm_table_[x * n + b]];
        if (lhs != rhs) {
          continuous_ = false;
          break;
        }
      }
}

void Lattice::validate_finite() const {
  std::size_t n = element_names_.size();
  auto t = [&](std::size_t i, std::size_t j) {
    return tnorm_table_[i * n + j];
  };
  for (std::size_t x = 0; x < n; ++x) {
    if (t(x, top_idx_) != x || t(top_idx_, x) != x)
      throw ValidationError("tnorm unit axiom fails");
    for (std::size_t y = 0; y < n; ++y) {
      if (t(x, y) != t(y, x))
        throw ValidationError("tnorm is not commutative");
      for (std::size_t z = 0; z < n; ++z) {
        if (t(t(x, y), z) != t(x, t(y, z)))
          throw ValidationError("tnorm is not associative");
        // Adjunction: z (x) x <= y iff z <= (x -> y).
        bool lhs = leq_[t(z, x) * n + y];
        bool rhs = leq_[z * n + residuum_table_[x * n + y]];
        if (lhs != rhs) throw ValidationError("adjunction fails on the table");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Values

std::size_t Lattice::size() const {
  if (!finite_) throw LatticeError("unit-interval carrier has no finite size");
  return element_names_.size();
}

Value Lattice::bot() const {
  return finite_ ? Value(tag_, bot_idx_) : Value(tag_, mpq_class(0));
}

Value Lattice::top() const {
  return finite_ ? Value(tag_, top_idx_) : Value(tag_, mpq_class(1));
}

Value Lattice::make(const mpq_class& q) const {
  if (finite_)
    throw LatticeError("rational values need a unit-interval carrier");
  if (q < 0 || q > 1)
    throw ValidationError("value " + rational_to_string(q) +
                          " lies outside [0,1]");
  mpq_class c = q;
  c.canonicalize();
  return Value(tag_, std::move(c));
}

Value Lattice::element(const std::string& name) const {
  if (!finite_) throw LatticeError("named elements need a finite carrier");
  auto it = std::find(element_names_.begin(), element_names_.end(), name);
  if (it == element_names_.end())
    throw ValidationError("unknown element '" + name + "' of lattice " +
                          name_);
  return Value(tag_, static_cast<std::size_t>(it - element_names_.begin()));
}

Value Lattice::element_at(std::size_t idx) const {
  if (!finite_) throw LatticeError("indexed elements need a finite carrier");
  if (idx >= element_names_.size())
    throw ValidationError("element index out of range");
  return Value(tag_, idx);
}

Value Lattice::parse(const std::string& text) const {
  if (finite_) return element(text);
  return make(parse_rational(text));
}

std::string Lattice::str(const Value& v) const {
  check(v);
  return finite_ ? element_names_[v.idx_] : rational_to_string(v.q_);
}

void Lattice::check(const Value& v) const {
  if (v.tag_ != tag_)
    throw LatticeError("value does not belong to lattice " + name_);
}

// ---------------------------------------------------------------------------
// Operations

bool Lattice::leq(const Value& a, const Value& b) const {
  check(a);
  check(b);
  if (finite_) return leq_[a.idx_ * element_names_.size() + b.idx_];
  return a.q_ <= b.q_;
}

bool Lattice::eq(const Value& a, const Value& b) const {
  check(a);
  check(b);
  return finite_ ? a.idx_ == b.idx_ : a.q_ == b.q_;
}

Value Lattice::meet(const Value& a, const Value& b) const {
  check(a);
  check(b);
  if (finite_) return Value(tag_, table_at(meet_table_, a.idx_, b.idx_));
  return Value(tag_, std::min(a.q_, b.q_));
}

Value Lattice::join(const Value& a, const Value& b) const {
  check(a);
  check(b);
  if (finite_) return Value(tag_, table_at(join_table_, a.idx_, b.idx_));
  return Value(tag_, std::max(a.q_, b.q_));
}

Value Lattice::tnorm(const Value& a, const Value& b) const {
  check(a);
  check(b);
  if (finite_) return Value(tag_, table_at(tnorm_table_, a.idx_, b.idx_));
  switch (kind_) {
    case TnormKind::Godel:
      return Value(tag_, std::min(a.q_, b.q_));
    case TnormKind::Lukasiewicz: {
      mpq_class s = a.q_ + b.q_ - 1;
      return Value(tag_, s > 0 ? s : mpq_class(0));
    }
    case TnormKind::Product: {
      mpq_class p = a.q_ * b.q_;
      p.canonicalize();
      return Value(tag_, std::move(p));
    }
    case TnormKind::Table:
      break;
  }
  throw LatticeError("table t-norm on a unit carrier");
}

Value Lattice::residuum(const Value& a, const Value& b) const {
  check(a);
  check(b);
  if (finite_) return Value(tag_, table_at(residuum_table_, a.idx_, b.idx_));
  if (a.q_ <= b.q_) return top();
  switch (kind_) {
    case TnormKind::Godel:
      return Value(tag_, b.q_);
    case TnormKind::Lukasiewicz:
      return Value(tag_, mpq_class(1 - a.q_ + b.q_));
    case TnormKind::Product: {
      mpq_class r = b.q_ / a.q_;
      r.canonicalize();
      return Value(tag_, std::move(r));
    }
    case TnormKind::Table:
      break;
  }
  throw LatticeError("table t-norm on a unit carrier");
}

Value Lattice::biresiduum(const Value& a, const Value& b) const {
  return meet(residuum(a, b), residuum(b, a));
}

Value Lattice::inf(std::span<const Value> values) const {
  Value acc = top();
  for (const Value& v : values) acc = meet(acc, v);
  return acc;
}

Value Lattice::sup(std::span<const Value> values) const {
  Value acc = bot();
  for (const Value& v : values) acc = join(acc, v);
  return acc;
}

mpq_class Lattice::distance(const Value& a, const Value& b) const {
  check(a);
  check(b);
  if (finite_) return a.idx_ == b.idx_ ? mpq_class(0) : mpq_class(1);
  mpq_class d = a.q_ - b.q_;
  return d < 0 ? mpq_class(-d) : d;
}

}  // namespace fuzzbis
