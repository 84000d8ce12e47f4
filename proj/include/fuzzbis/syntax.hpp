#ifndef FUZZBIS_SYNTAX_HPP
#define FUZZBIS_SYNTAX_HPP

#include <memory>
#include <span>
#include <string>

#include "fuzzbis/lattice.hpp"

namespace fuzzbis {

struct Formula;
struct Program;
using FormulaPtr = std::shared_ptr<const Formula>;
using ProgramPtr = std::shared_ptr<const Program>;

/// Programs: atomic actions, tests, union, sequential composition, iteration.
struct Program {
  enum class Kind { Atomic, Test, Union, Compose, Star };

  Kind kind;
  std::string action;  // Atomic
  FormulaPtr test;     // Test
  ProgramPtr left;     // Union/Compose/Star
  ProgramPtr right;    // Union/Compose

  static ProgramPtr atomic(std::string action);
  static ProgramPtr test_of(FormulaPtr f);
  static ProgramPtr union_(ProgramPtr a, ProgramPtr b);
  static ProgramPtr compose(ProgramPtr a, ProgramPtr b);
  static ProgramPtr star(ProgramPtr a);
};

/// Formulas. Implications with a constant on one side are distinct variants
/// because they stay available in every fragment; ~f abbreviates f -> 0 in
/// the semantics but is kept as its own node.
struct Formula {
  enum class Kind {
    Const,
    Prop,
    And,
    Or,
    Implies,           // between two non-constant formulas
    ImpliesFromConst,  // a -> f
    ImpliesToConst,    // f -> a
    Not,
    Box,
    Diamond,
    Otimes  // strong conjunction; internal to star semantics, no grammar token
  };

  Kind kind;
  Value constant;    // Const / ImpliesFromConst / ImpliesToConst
  std::string prop;  // Prop
  FormulaPtr left;   // binary / unary operand
  FormulaPtr right;  // binary second operand
  ProgramPtr prog;   // Box / Diamond

  static FormulaPtr constant_of(Value v);
  static FormulaPtr prop_of(std::string name);
  static FormulaPtr and_(FormulaPtr a, FormulaPtr b);
  static FormulaPtr or_(FormulaPtr a, FormulaPtr b);
  /// Classifies by the operands: Const on the left yields ImpliesFromConst,
  /// Const on the right yields ImpliesToConst, otherwise Implies.
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr not_(FormulaPtr a);
  static FormulaPtr otimes(FormulaPtr a, FormulaPtr b);
  static FormulaPtr box(ProgramPtr p, FormulaPtr f);
  static FormulaPtr diamond(ProgramPtr p, FormulaPtr f);
};

std::string to_string(const Formula& f);
std::string to_string(const Program& p);
inline std::string to_string(const FormulaPtr& f) { return to_string(*f); }
inline std::string to_string(const ProgramPtr& p) { return to_string(*p); }

bool structurally_equal(const Formula& a, const Formula& b);
bool structurally_equal(const Program& a, const Program& b);

/// Grammar (precedence loose to tight):
///   formula: implication (right assoc, "->") > "\/" > "/\" > unary
///   unary:   "~" f | "<" program ">" f | "[" program "]" f | atom
///   atom:    rational/decimal literal | identifier | "(" formula ")"
///   program: "|" > ";" > postfix ("*", and "?" turning a formula into a test)
/// On finite lattices an identifier naming a carrier element is a constant;
/// every other identifier is a proposition.
FormulaPtr parse_formula(const std::string& text, const LatticePtr& lattice);
ProgramPtr parse_program(const std::string& text, const LatticePtr& lattice);

/// Which constructors are excluded from the language.
struct FragmentSpec {
  bool exclude_union = false;
  bool exclude_implies = false;  // only full implication between formulas
  bool exclude_test = false;

  static FragmentSpec full() { return {}; }
  /// Parses a comma-separated list of "union", "implies", "test".
  static FragmentSpec parse(const std::string& text);
  std::string str() const;
};

bool in_fragment(const Formula& f, const FragmentSpec& phi);
bool in_fragment(const Program& p, const FragmentSpec& phi);

/// The diamond-only sublanguage: a, p, f /\ g, a -> f, f -> a, <action>f.
bool is_fKz(const Formula& f);

/// Right-nested /\ over the given formulas, terminated by the constant 1;
/// the empty family yields 1.
FormulaPtr big_wedge(std::span<const FormulaPtr> gamma,
                     const LatticePtr& lattice);
/// Same shape with the t-norm fold used in star semantics. Not part of the
/// surface grammar; evaluated structurally by the model evaluator.
FormulaPtr big_otimes(std::span<const FormulaPtr> gamma,
                      const LatticePtr& lattice);

}  // namespace fuzzbis

#endif  // FUZZBIS_SYNTAX_HPP
