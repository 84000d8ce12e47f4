#include "fuzzbis/model.hpp"

#include <fstream>

namespace fuzzbis {

bool KripkeModel::has_prop(const std::string& name) const {
  for (const auto& [n, _] : props_)
    if (n == name) return true;
  return false;
}

bool KripkeModel::has_action(const std::string& name) const {
  for (const auto& [n, _] : actions_)
    if (n == name) return true;
  return false;
}

const FuzzySet& KripkeModel::prop(const std::string& name) const {
  for (const auto& [n, f] : props_)
    if (n == name) return f;
  throw ValidationError("unknown proposition '" + name + "'");
}

const FuzzyRelation& KripkeModel::action(const std::string& name) const {
  for (const auto& [n, r] : actions_)
    if (n == name) return r;
  throw ValidationError("unknown action '" + name + "'");
}

void KripkeModel::add_prop(const std::string& name, FuzzySet values) {
  if (has_prop(name))
    throw ValidationError("duplicate proposition '" + name + "'");
  if (values.lattice()->tag() != lattice_->tag() ||
      values.domain() != states_)
    throw ValidationError("proposition '" + name +
                          "' does not match the model's states/lattice");
  props_.emplace_back(name, std::move(values));
}

void KripkeModel::add_action(const std::string& name, FuzzyRelation rel) {
  if (has_action(name)) throw ValidationError("duplicate action '" + name + "'");
  if (rel.lattice()->tag() != lattice_->tag() || rel.rows() != states_ ||
      rel.cols() != states_)
    throw ValidationError("action '" + name +
                          "' does not match the model's states/lattice");
  actions_.emplace_back(name, std::move(rel));
}

KripkeModel KripkeModel::from_json(const nlohmann::json& doc,
                                   LatticePtr fallback_lattice) {
  if (!doc.is_object()) throw ValidationError("model must be a JSON object");
  LatticePtr lat;
  if (doc.contains("lattice"))
    lat = Lattice::from_spec(doc.at("lattice"));
  else if (fallback_lattice)
    lat = std::move(fallback_lattice);
  else
    throw ValidationError("model has no 'lattice' and no default was given");

  if (!doc.contains("states"))
    throw ValidationError("model needs a 'states' array");
  auto states = doc.at("states").get<std::vector<std::string>>();
  if (states.empty()) throw ValidationError("model needs at least one state");
  for (std::size_t i = 0; i < states.size(); ++i)
    for (std::size_t j = i + 1; j < states.size(); ++j)
      if (states[i] == states[j])
        throw ValidationError("duplicate state '" + states[i] + "'");

  KripkeModel m(lat, states);
  const nlohmann::json props = doc.value("props", nlohmann::json::object());
  const nlohmann::json actions = doc.value("actions", nlohmann::json::object());
  for (const auto& [name, val] : props.items())
    m.add_prop(name, FuzzySet::from_json(lat, states, val));
  for (const auto& [name, val] : actions.items()) {
    FuzzyRelation r(lat, states, states);
    if (!val.is_array())
      throw ValidationError("action '" + name +
                            "' must be an array of [from, to, value] triples");
    for (const auto& entry : val) {
      if (!entry.is_array() || entry.size() != 3)
        throw ValidationError("action entry must be [from, to, value]");
      std::string text = entry[2].is_string() ? entry[2].get<std::string>()
                                              : entry[2].dump();
      r.set(entry[0].get<std::string>(), entry[1].get<std::string>(),
            lat->parse(text));
    }
    m.add_action(name, std::move(r));
  }
  return m;
}

nlohmann::json KripkeModel::to_json() const {
  nlohmann::json out;
  out["lattice"] = lattice_->name();
  out["states"] = states_;
  auto props = nlohmann::json::object();
  for (const auto& [name, f] : props_) props[name] = f.to_json();
  out["props"] = std::move(props);
  auto actions = nlohmann::json::object();
  for (const auto& [name, r] : actions_) {
    auto triples = nlohmann::json::array();
    for (std::size_t i = 0; i < states_.size(); ++i)
      for (std::size_t j = 0; j < states_.size(); ++j)
        if (!lattice_->eq(r.at(i, j), lattice_->bot()))
          triples.push_back({states_[i], states_[j], lattice_->str(r.at(i, j))});
    actions[name] = std::move(triples);
  }
  out["actions"] = std::move(actions);
  return out;
}

KripkeModel load_model(const std::string& path, LatticePtr fallback_lattice) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in '" + path + "': " + e.what());
  }
  return KripkeModel::from_json(doc, std::move(fallback_lattice));
}

// ---------------------------------------------------------------------------
// Evaluator

FuzzyRelation Evaluator::eval(const Program& p) {
  std::string key = to_string(p);
  if (auto it = program_cache_.find(key); it != program_cache_.end())
    return it->second;

  const auto& lat = model_->lattice();
  const auto& states = model_->states();
  FuzzyRelation out(lat, states, states);
  switch (p.kind) {
    case Program::Kind::Atomic:
      out = model_->action(p.action);
      break;
    case Program::Kind::Test: {
      FuzzySet f = eval(*p.test);
      for (std::size_t i = 0; i < states.size(); ++i) out.set(i, i, f.at(i));
      break;
    }
    case Program::Kind::Union: {
      FuzzyRelation a = eval(*p.left);
      FuzzyRelation b = eval(*p.right);
      for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t j = 0; j < states.size(); ++j)
          out.set(i, j, lat->join(a.at(i, j), b.at(i, j)));
      break;
    }
    case Program::Kind::Compose:
      out = compose(eval(*p.left), eval(*p.right));
      break;
    case Program::Kind::Star: {
      // Paths that revisit a state never increase the value (the t-norm is
      // deflationary), so joining powers 0 .. |states|-1 is exhaustive.
      FuzzyRelation a = eval(*p.left);
      FuzzyRelation pow = FuzzyRelation::identity(lat, states);
      out = pow;
      for (std::size_t k = 1; k < states.size(); ++k) {
        pow = compose(pow, a);
        for (std::size_t i = 0; i < states.size(); ++i)
          for (std::size_t j = 0; j < states.size(); ++j)
            out.set(i, j, lat->join(out.at(i, j), pow.at(i, j)));
      }
      break;
    }
  }
  program_cache_.emplace(std::move(key), out);
  return out;
}

FuzzySet Evaluator::eval(const Formula& f) {
  std::string key = to_string(f);
  if (auto it = formula_cache_.find(key); it != formula_cache_.end())
    return it->second;

  const auto& lat = model_->lattice();
  const auto& states = model_->states();
  FuzzySet out(lat, states);
  auto pointwise = [&](const Formula& node, auto&& op) {
    FuzzySet a = eval(*node.left);
    FuzzySet b = eval(*node.right);
    for (std::size_t i = 0; i < states.size(); ++i)
      out.set(i, op(a.at(i), b.at(i)));
  };
  switch (f.kind) {
    case Formula::Kind::Const:
      for (std::size_t i = 0; i < states.size(); ++i) out.set(i, f.constant);
      break;
    case Formula::Kind::Prop:
      out = model_->prop(f.prop);
      break;
    case Formula::Kind::And:
      pointwise(f, [&](const Value& a, const Value& b) {
        return lat->meet(a, b);
      });
      break;
    case Formula::Kind::Or:
      pointwise(f, [&](const Value& a, const Value& b) {
        return lat->join(a, b);
      });
      break;
    case Formula::Kind::Otimes:
      pointwise(f, [&](const Value& a, const Value& b) {
        return lat->tnorm(a, b);
      });
      break;
    case Formula::Kind::Implies:
      pointwise(f, [&](const Value& a, const Value& b) {
        return lat->residuum(a, b);
      });
      break;
    case Formula::Kind::ImpliesFromConst: {
      FuzzySet a = eval(*f.left);
      for (std::size_t i = 0; i < states.size(); ++i)
        out.set(i, lat->residuum(f.constant, a.at(i)));
      break;
    }
    case Formula::Kind::ImpliesToConst: {
      FuzzySet a = eval(*f.left);
      for (std::size_t i = 0; i < states.size(); ++i)
        out.set(i, lat->residuum(a.at(i), f.constant));
      break;
    }
    case Formula::Kind::Not: {
      FuzzySet a = eval(*f.left);
      for (std::size_t i = 0; i < states.size(); ++i)
        out.set(i, lat->residuum(a.at(i), lat->bot()));
      break;
    }
    case Formula::Kind::Box: {
      FuzzyRelation r = eval(*f.prog);
      FuzzySet a = eval(*f.left);
      for (std::size_t i = 0; i < states.size(); ++i) {
        Value acc = lat->top();
        for (std::size_t j = 0; j < states.size(); ++j)
          acc = lat->meet(acc, lat->residuum(r.at(i, j), a.at(j)));
        out.set(i, acc);
      }
      break;
    }
    case Formula::Kind::Diamond: {
      FuzzyRelation r = eval(*f.prog);
      FuzzySet a = eval(*f.left);
      for (std::size_t i = 0; i < states.size(); ++i) {
        Value acc = lat->bot();
        for (std::size_t j = 0; j < states.size(); ++j)
          acc = lat->join(acc, lat->tnorm(r.at(i, j), a.at(j)));
        out.set(i, acc);
      }
      break;
    }
  }
  formula_cache_.emplace(std::move(key), out);
  return out;
}

Value Evaluator::eval_at(const Formula& f, const std::string& state) {
  return eval(f).at(state);
}

ModelStats model_stats(const KripkeModel& m) {
  ModelStats s;
  s.states = m.states().size();
  s.props = m.props().size();
  s.actions = m.actions().size();
  s.lattice = m.lattice()->name();
  const auto& lat = m.lattice();
  for (const auto& [_, r] : m.actions())
    for (std::size_t i = 0; i < s.states; ++i)
      for (std::size_t j = 0; j < s.states; ++j)
        if (!lat->eq(r.at(i, j), lat->bot())) ++s.nonzero_transitions;
  return s;
}

}  // namespace fuzzbis
