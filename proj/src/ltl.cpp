#include "ltlplan/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "ltlplan/errors.hpp"

namespace ltlplan {

std::set<std::string> Formula::atoms() const {
  std::set<std::string> out;
  if (kind == Kind::Atom || kind == Kind::NotAtom) out.insert(atom);
  if (kind == Kind::TriggerSafety) {
    out.insert(trigger);
    out.insert(forbidden);
  }
  for (const auto& c : children) {
    auto sub = c.atoms();
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::string Formula::str() const {
  switch (kind) {
    case Kind::Atom: return atom;
    case Kind::NotAtom: return "!" + atom;
    case Kind::And: return children[0].str() + " & " + children[1].str();
    case Kind::Or: return children[0].str() + "||" + children[1].str();
    case Kind::Eventually: return "F(" + children[0].str() + ")";
    case Kind::TriggerSafety:
      return "G(" + trigger + " -> X G(!" + forbidden + "))";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum class Type { F, G, X, Atom, LParen, RParen, And, Or, Not, Arrow, End };
  Type type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    const std::size_t pos = i;
    if (c == '(') { out.push_back({Token::Type::LParen, "(", pos}); ++i; continue; }
    if (c == ')') { out.push_back({Token::Type::RParen, ")", pos}); ++i; continue; }
    if (c == '&') { out.push_back({Token::Type::And, "&", pos}); ++i; continue; }
    if (c == '!') { out.push_back({Token::Type::Not, "!", pos}); ++i; continue; }
    if (c == '|') {
      i += (i + 1 < text.size() && text[i + 1] == '|') ? 2 : 1;
      out.push_back({Token::Type::Or, "|", pos});
      continue;
    }
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Token::Type::Arrow, "->", pos});
      i += 2;
      continue;
    }
    if (std::isupper(static_cast<unsigned char>(c))) {
      switch (c) {
        case 'F': out.push_back({Token::Type::F, "F", pos}); break;
        case 'G': out.push_back({Token::Type::G, "G", pos}); break;
        case 'X': out.push_back({Token::Type::X, "X", pos}); break;
        case 'U':
          throw UnsupportedFragment("Until operator at position " +
                                    std::to_string(pos) + " is not supported");
        case 'R':
          throw UnsupportedFragment("Release operator at position " +
                                    std::to_string(pos) + " is not supported");
        default:
          throw ParseError("syntax error at position " + std::to_string(pos) +
                           ": unexpected '" + std::string(1, c) + "'");
      }
      ++i;
      continue;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (std::islower(static_cast<unsigned char>(text[j])) ||
              std::isdigit(static_cast<unsigned char>(text[j]))))
        ++j;
      out.push_back({Token::Type::Atom, text.substr(i, j - i), pos});
      i = j;
      continue;
    }
    throw ParseError("syntax error at position " + std::to_string(pos) +
                     ": unexpected '" + std::string(1, c) + "'");
  }
  out.push_back({Token::Type::End, "", text.size()});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(tokenize(text)) {}

  Formula parse() {
    Formula seq = parse_seq();
    if (peek().type == Token::Type::And) {
      advance();
      Formula safety = parse_safety();
      Formula top;
      top.kind = Formula::Kind::And;
      top.children = {std::move(seq), std::move(safety)};
      expect(Token::Type::End, "end of input");
      return top;
    }
    expect(Token::Type::End, "end of input");
    return seq;
  }

 private:
  const Token& peek() const { return tokens_[idx_]; }
  void advance() { ++idx_; }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError("syntax error at position " + std::to_string(peek().pos) +
                     ": expected " + expected);
  }

  Token expect(Token::Type t, const std::string& what) {
    if (peek().type != t) fail(what);
    Token tok = peek();
    advance();
    return tok;
  }

  Formula parse_seq() {
    expect(Token::Type::F, "'F'");
    expect(Token::Type::LParen, "'('");
    Formula stage = parse_stage();
    expect(Token::Type::RParen, "')'");
    Formula f;
    f.kind = Formula::Kind::Eventually;
    f.children = {std::move(stage)};
    return f;
  }

  Formula parse_stage() {
    Formula d = parse_disj();
    if (peek().type == Token::Type::And) {
      advance();
      Formula rest = parse_seq();
      Formula f;
      f.kind = Formula::Kind::And;
      f.children = {std::move(d), std::move(rest)};
      return f;
    }
    return d;
  }

  Formula parse_disj() {
    Formula a = parse_atom();
    if (peek().type == Token::Type::Or) {
      advance();
      Formula rest = parse_disj();
      Formula f;
      f.kind = Formula::Kind::Or;
      f.children = {std::move(a), std::move(rest)};
      return f;
    }
    return a;
  }

  Formula parse_atom() {
    Token t = expect(Token::Type::Atom, "atom");
    Formula f;
    f.kind = Formula::Kind::Atom;
    f.atom = t.text;
    return f;
  }

  // G(a -> X G(!b)); the literal "G(a & X G(!b))" spelling is read the same
  // way, as trigger-response.
  Formula parse_safety() {
    expect(Token::Type::G, "'G'");
    expect(Token::Type::LParen, "'('");
    Token trig = expect(Token::Type::Atom, "atom");
    if (peek().type == Token::Type::Arrow || peek().type == Token::Type::And)
      advance();
    else
      fail("'->' or '&'");
    expect(Token::Type::X, "'X'");
    expect(Token::Type::G, "'G'");
    expect(Token::Type::LParen, "'('");
    expect(Token::Type::Not, "'!'");
    Token forb = expect(Token::Type::Atom, "atom");
    expect(Token::Type::RParen, "')'");
    expect(Token::Type::RParen, "')'");
    Formula f;
    f.kind = Formula::Kind::TriggerSafety;
    f.trigger = trig.text;
    f.forbidden = forb.text;
    return f;
  }

  std::vector<Token> tokens_;
  std::size_t idx_ = 0;
};

// Flattened task shape: ordered stages (each a disjunction of atoms) plus an
// optional trigger-safety pair.
struct StagedTask {
  std::vector<std::vector<std::string>> stages;
  std::optional<std::pair<std::string, std::string>> safety;
};

void flatten_disj(const Formula& f, std::vector<std::string>& out) {
  if (f.kind == Formula::Kind::Atom) {
    out.push_back(f.atom);
    return;
  }
  if (f.kind == Formula::Kind::Or) {
    flatten_disj(f.children[0], out);
    flatten_disj(f.children[1], out);
    return;
  }
  throw UnsupportedFragment("stage goal must be a disjunction of atoms");
}

void flatten_seq(const Formula& f, StagedTask& task) {
  if (f.kind != Formula::Kind::Eventually)
    throw UnsupportedFragment("expected an F(...) chain");
  const Formula& stage = f.children[0];
  if (stage.kind == Formula::Kind::And) {
    std::vector<std::string> atoms;
    flatten_disj(stage.children[0], atoms);
    task.stages.push_back(std::move(atoms));
    flatten_seq(stage.children[1], task);
  } else {
    std::vector<std::string> atoms;
    flatten_disj(stage, atoms);
    task.stages.push_back(std::move(atoms));
  }
}

StagedTask to_staged_task(const Formula& f) {
  StagedTask task;
  if (f.kind == Formula::Kind::And &&
      f.children[1].kind == Formula::Kind::TriggerSafety) {
    flatten_seq(f.children[0], task);
    task.safety = {f.children[1].trigger, f.children[1].forbidden};
  } else {
    flatten_seq(f, task);
  }
  if (task.stages.empty())
    throw UnsupportedFragment("formula has no reachability stage");
  return task;
}

bool disj_holds(const std::vector<std::string>& disj, const LabelSet& label) {
  return std::any_of(disj.begin(), disj.end(),
                     [&](const std::string& a) { return label.count(a) > 0; });
}

}  // namespace

Formula parse_ltl(const std::string& text) { return Parser(text).parse(); }

// ---------------------------------------------------------------------------
// DFA compilation

bool Guard::eval(const LabelSet& label) const {
  for (const auto& clause : clauses) {
    if (!disj_holds(clause, label)) return false;
  }
  return true;
}

std::string Guard::str() const {
  if (clauses.empty()) return "1";
  std::ostringstream out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    if (i) out << " & ";
    if (clauses[i].size() > 1) {
      out << '(';
      for (std::size_t j = 0; j < clauses[i].size(); ++j) {
        if (j) out << '|';
        out << clauses[i][j];
      }
      out << ')';
    } else {
      out << clauses[i][0];
    }
  }
  return out.str();
}

namespace {

// Semantic state during compilation: task stage reached plus whether the
// safety trigger has already fired. Trap is handled separately.
struct Key {
  int stage;
  bool seen;
  auto operator<=>(const Key&) const = default;
};

Guard stage_guard(const StagedTask& task, int from, int to,
                  const std::optional<std::string>& extra) {
  Guard g;
  for (int k = from; k < to; ++k) g.clauses.push_back(task.stages[k]);
  if (extra) g.clauses.push_back({*extra});
  return g;
}

}  // namespace

Dfa compile_dfa(const Formula& f) {
  const StagedTask task = to_staged_task(f);
  const int n = static_cast<int>(task.stages.size());

  Dfa d;
  d.stage_guards = task.stages;
  {
    auto atoms = f.atoms();
    d.alphabet.assign(atoms.begin(), atoms.end());
  }

  if (!task.safety) {
    // q_i = i stages satisfied; maximal advance per label, then self-loop.
    for (int i = 0; i <= n; ++i) {
      d.state_names.push_back("q" + std::to_string(i));
      d.stage_index.push_back(i);
      d.safety_active.push_back(false);
      std::vector<std::pair<Guard, int>> trans;
      for (int j = n; j > i; --j)
        trans.emplace_back(stage_guard(task, i, j, std::nullopt), j);
      trans.emplace_back(Guard{}, i);
      d.transitions.push_back(std::move(trans));
    }
    d.accepting = {n};
    return d;
  }

  const auto& [trig, forb] = *task.safety;

  // Reachable (stage, seen) keys under exhaustive label subsets.
  auto advance = [&](int stage, const LabelSet& label) {
    int j = stage;
    while (j < n && disj_holds(task.stages[j], label)) ++j;
    return j;
  };
  std::set<Key> reachable;
  std::vector<Key> frontier{{0, false}};
  reachable.insert(frontier[0]);
  const std::size_t nlabels = std::size_t{1} << d.alphabet.size();
  while (!frontier.empty()) {
    Key cur = frontier.back();
    frontier.pop_back();
    for (std::size_t mask = 0; mask < nlabels; ++mask) {
      LabelSet label;
      for (std::size_t b = 0; b < d.alphabet.size(); ++b)
        if (mask & (std::size_t{1} << b)) label.insert(d.alphabet[b]);
      if (cur.seen && label.count(forb)) continue;  // goes to trap
      Key next{advance(cur.stage, label), cur.seen || label.count(trig) > 0};
      if (reachable.insert(next).second) frontier.push_back(next);
    }
  }

  std::vector<Key> ordered(reachable.begin(), reachable.end());
  std::sort(ordered.begin(), ordered.end());
  std::map<Key, int> index;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    index[ordered[i]] = static_cast<int>(i);
    d.state_names.push_back("q" + std::to_string(i));
    d.stage_index.push_back(ordered[i].stage);
    d.safety_active.push_back(ordered[i].seen);
    if (ordered[i].stage == n) d.accepting.insert(static_cast<int>(i));
  }
  const int trap_id = static_cast<int>(ordered.size());
  d.state_names.push_back("trap");
  d.stage_index.push_back(-1);
  d.safety_active.push_back(true);
  d.trap = trap_id;

  for (const Key& key : ordered) {
    std::vector<std::pair<Guard, int>> trans;
    auto emit = [&](Guard g, Key target) {
      auto it = index.find(target);
      if (it != index.end()) trans.emplace_back(std::move(g), it->second);
      // A transition to an unreachable key can never fire; drop it.
    };
    if (key.seen) {
      trans.emplace_back(Guard{{{forb}}}, trap_id);
      for (int j = n; j > key.stage; --j)
        emit(stage_guard(task, key.stage, j, std::nullopt), {j, true});
      trans.emplace_back(Guard{}, index.at(key));
    } else {
      for (int j = n; j > key.stage; --j) {
        emit(stage_guard(task, key.stage, j, trig), {j, true});
        emit(stage_guard(task, key.stage, j, std::nullopt), {j, false});
      }
      emit(Guard{{{trig}}}, {key.stage, true});
      trans.emplace_back(Guard{}, index.at(key));
    }
    d.transitions.push_back(std::move(trans));
  }
  d.transitions.push_back({{Guard{}, trap_id}});  // trap absorbs everything

  d.initial = index.at({0, false});
  d.safety = task.safety;
  return d;
}

int dfa_step(const Dfa& d, int state, const LabelSet& label) {
  for (const auto& [guard, target] : d.transitions[state]) {
    if (guard.eval(label)) return target;
  }
  return state;  // unreachable: every state ends with a True self-loop
}

bool accepts(const Dfa& d, const std::vector<LabelSet>& trace) {
  int q = d.initial;
  for (const auto& label : trace) q = dfa_step(d, q, label);
  return d.accepting.count(q) > 0;
}

// ---------------------------------------------------------------------------
// Finite-trace oracle

namespace {

bool eval_at(const Formula& f, const std::vector<LabelSet>& trace, std::size_t i) {
  switch (f.kind) {
    case Formula::Kind::Atom:
      return i < trace.size() && trace[i].count(f.atom) > 0;
    case Formula::Kind::NotAtom:
      return i < trace.size() && trace[i].count(f.atom) == 0;
    case Formula::Kind::And:
      return eval_at(f.children[0], trace, i) && eval_at(f.children[1], trace, i);
    case Formula::Kind::Or:
      return eval_at(f.children[0], trace, i) || eval_at(f.children[1], trace, i);
    case Formula::Kind::Eventually:
      for (std::size_t j = i; j < trace.size(); ++j)
        if (eval_at(f.children[0], trace, j)) return true;
      return false;
    case Formula::Kind::TriggerSafety:
      for (std::size_t j = i; j < trace.size(); ++j) {
        if (trace[j].count(f.trigger)) {
          for (std::size_t k = j + 1; k < trace.size(); ++k)
            if (trace[k].count(f.forbidden)) return false;
          return true;
        }
      }
      return true;  // trigger never fires
  }
  return false;
}

}  // namespace

bool eval_finite_trace(const Formula& f, const std::vector<LabelSet>& trace) {
  return eval_at(f, trace, 0);
}

std::string dfa_to_dot(const Dfa& d) {
  std::ostringstream out;
  out << "digraph dfa {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (int s = 0; s < d.state_count(); ++s) {
    out << "  \"" << d.state_names[s] << "\"";
    if (d.accepting.count(s))
      out << " [shape=doublecircle]";
    out << ";\n";
  }
  out << "  __start [shape=point];\n  __start -> \"" << d.state_names[d.initial]
      << "\";\n";
  for (int s = 0; s < d.state_count(); ++s) {
    for (const auto& [guard, target] : d.transitions[s]) {
      out << "  \"" << d.state_names[s] << "\" -> \"" << d.state_names[target]
          << "\" [label=\"" << guard.str() << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace ltlplan
