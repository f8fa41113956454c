#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace ltlplan {

/// AST for the restricted co-safe fragment:
///   formula := seq | seq "&" safety
///   seq     := "F" "(" stage ")"
///   stage   := disj | disj "&" seq
///   disj    := atom | atom ("||"|"|") disj
///   safety  := "G" "(" atom "->" "X" "G" "(" "!" atom ")" ")"
/// Negation occurs only on atoms; the safety clause is kept as a dedicated
/// node so its trigger-response semantics stay explicit.
struct Formula {
  enum class Kind { Atom, NotAtom, And, Or, Eventually, TriggerSafety };

  Kind kind = Kind::Atom;
  std::string atom;                // Atom / NotAtom
  std::string trigger, forbidden;  // TriggerSafety
  std::vector<Formula> children;   // And/Or: 2, Eventually: 1

  std::set<std::string> atoms() const;
  std::string str() const;
};

using LabelSet = std::set<std::string>;

/// Conjunction of positive clauses; each clause is a disjunction of atoms.
/// Empty clause list means True.
struct Guard {
  std::vector<std::vector<std::string>> clauses;

  bool eval(const LabelSet& label) const;
  std::string str() const;
};

/// Guarded-transition DFA. Per-state transition lists are ordered: the first
/// guard matching a label fires, and every state ends with a True self-loop.
struct Dfa {
  std::vector<std::string> state_names;  // "q0".., trap named "trap"
  int initial = 0;
  std::set<int> accepting;
  std::optional<int> trap;
  std::vector<std::vector<std::pair<Guard, int>>> transitions;  // per state

  std::vector<std::string> alphabet;              // sorted formula atoms
  std::vector<int> stage_index;                   // per state; -1 for trap
  std::vector<bool> safety_active;                // per state: trigger already fired
  std::vector<std::vector<std::string>> stage_guards;  // disjunction per task stage
  std::optional<std::pair<std::string, std::string>> safety;  // trigger, forbidden

  int state_count() const { return static_cast<int>(state_names.size()); }
};

Formula parse_ltl(const std::string& text);

Dfa compile_dfa(const Formula& f);

int dfa_step(const Dfa& d, int state, const LabelSet& label);

bool accepts(const Dfa& d, const std::vector<LabelSet>& trace);

/// Independent finite-trace semantics, used as the oracle for compile_dfa.
bool eval_finite_trace(const Formula& f, const std::vector<LabelSet>& trace);

std::string dfa_to_dot(const Dfa& d);

}  // namespace ltlplan
