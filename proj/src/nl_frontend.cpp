#include "ltlplan/nl_frontend.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "ltlplan/errors.hpp"
#include "ltlplan/ltl.hpp"

namespace ltlplan {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

struct Mention {
  std::string atom;
  std::size_t begin;
  std::size_t end;
};

std::string render(const std::vector<std::vector<std::string>>& stages,
                   const std::optional<std::pair<std::string, std::string>>& safety) {
  std::string out;
  for (const auto& stage : stages) {
    out += "F(";
    for (std::size_t i = 0; i < stage.size(); ++i) {
      if (i) out += "||";
      out += stage[i];
    }
    if (&stage != &stages.back()) out += " & ";
  }
  out += std::string(stages.size(), ')');
  if (safety)
    out += " & G(" + safety->first + " -> X G(!" + safety->second + "))";
  return out;
}

}  // namespace

std::string translate_rules(const std::string& text,
                            const std::set<std::string>& known_atoms) {
  const std::string lower = lowercase(text);

  // Safety phrasing: "avoid X after Y" / "never X after Y".
  std::optional<std::pair<std::string, std::string>> safety;  // trigger, forbidden
  std::size_t safety_begin = std::string::npos, safety_end = std::string::npos;
  static const std::regex safety_re(
      R"((?:avoid|never)\s+([a-z][a-z0-9]*)\s+after\s+([a-z][a-z0-9]*))");
  std::smatch m;
  if (std::regex_search(lower, m, safety_re)) {
    const std::string forbidden = m[1].str();
    const std::string trigger = m[2].str();
    if (known_atoms.count(forbidden) && known_atoms.count(trigger)) {
      safety = {trigger, forbidden};
      safety_begin = static_cast<std::size_t>(m.position(0));
      safety_end = safety_begin + static_cast<std::size_t>(m.length(0));
    }
  }

  // Ordered goal mentions and "or" markers.
  std::vector<Mention> mentions;
  std::vector<std::size_t> or_positions;
  static const std::regex word_re(R"([a-z][a-z0-9]*)");
  for (auto it = std::sregex_iterator(lower.begin(), lower.end(), word_re);
       it != std::sregex_iterator(); ++it) {
    const std::size_t begin = static_cast<std::size_t>(it->position());
    const std::size_t end = begin + static_cast<std::size_t>(it->length());
    if (begin >= safety_begin && end <= safety_end) continue;
    const std::string word = it->str();
    if (word == "or")
      or_positions.push_back(begin);
    else if (known_atoms.count(word))
      mentions.push_back({word, begin, end});
  }
  if (mentions.empty())
    throw NoGoalsRecognized("no known goal atoms in '" + text + "'");

  // Each "or" must sit between two adjacent mentions; it folds them into one
  // disjunctive stage.
  std::vector<bool> fold_with_next(mentions.size(), false);
  for (std::size_t pos : or_positions) {
    bool placed = false;
    for (std::size_t i = 0; i + 1 < mentions.size(); ++i) {
      if (pos > mentions[i].end && pos < mentions[i + 1].begin) {
        fold_with_next[i] = true;
        placed = true;
        break;
      }
    }
    if (!placed)
      throw AmbiguousOrder("'or' does not join two adjacent goal mentions in '" +
                           text + "'");
  }

  std::vector<std::vector<std::string>> stages;
  for (std::size_t i = 0; i < mentions.size(); ++i) {
    if (i > 0 && fold_with_next[i - 1])
      stages.back().push_back(mentions[i].atom);
    else
      stages.push_back({mentions[i].atom});
  }
  return render(stages, safety);
}

std::string extract_formula_candidate(const std::string& raw) {
  std::string text = std::regex_replace(raw, std::regex("```[a-z]*"), " ");
  auto is_formula_char = [](char c) {
    return std::islower(static_cast<unsigned char>(c)) ||
           std::isdigit(static_cast<unsigned char>(c)) || c == 'F' || c == 'G' ||
           c == 'X' || c == '(' || c == ')' || c == '&' || c == '|' || c == '!' ||
           c == '-' || c == '>' || c == ' ';
  };
  std::size_t best_begin = 0, best_len = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_formula_char(text[i])) { ++i; continue; }
    std::size_t j = i;
    while (j < text.size() && is_formula_char(text[j])) ++j;
    // A usable run must contain an F; plain prose fragments rarely do.
    const std::string run = text.substr(i, j - i);
    if (run.find('F') != std::string::npos && j - i > best_len) {
      best_begin = i;
      best_len = j - i;
    }
    i = j;
  }
  std::string out = text.substr(best_begin, best_len);
  const auto first = out.find('F');
  if (first != std::string::npos) out = out.substr(first);
  while (!out.empty() && (out.back() == ' ' || out.back() == '-' || out.back() == '>'))
    out.pop_back();
  return out;
}

TranslationResult translate_llm(const std::string& text,
                                const LlmEndpointConfig& cfg,
                                const std::set<std::string>& known_atoms) {
  std::optional<std::string> raw;

  auto fallback = [&]() {
    TranslationResult r;
    r.formula_text = translate_rules(text, known_atoms);
    r.source = TranslationSource::LlmFallbackToRules;
    r.raw_model_output = raw;
    return r;
  };

  std::string atoms_list;
  for (const auto& a : known_atoms) {
    if (!atoms_list.empty()) atoms_list += ", ";
    atoms_list += a;
  }
  std::string prompt = cfg.prompt_template;
  for (auto [slot, value] : {std::pair<std::string, const std::string&>{"{task}", text},
                             {"{atoms}", atoms_list}}) {
    for (std::size_t p = prompt.find(slot); p != std::string::npos;
         p = prompt.find(slot))
      prompt.replace(p, slot.size(), value);
  }

  try {
    httplib::Client client(cfg.base_url);
    const auto timeout = static_cast<time_t>(cfg.timeout_seconds);
    client.set_connection_timeout(timeout, 0);
    client.set_read_timeout(timeout, 0);
    if (!cfg.api_key.empty()) client.set_bearer_token_auth(cfg.api_key);

    const nlohmann::json body{
        {"model", cfg.model_name},
        {"messages", {{{"role", "user"}, {"content", prompt}}}}};

    httplib::Result res;
    for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
      res = client.Post("/v1/chat/completions", body.dump(), "application/json");
      if (res && res->status == 200) break;
    }
    if (!res || res->status != 200) return fallback();

    const auto reply = nlohmann::json::parse(res->body);
    raw = reply.at("choices").at(0).at("message").at("content").get<std::string>();

    const std::string candidate = extract_formula_candidate(*raw);
    const Formula f = parse_ltl(candidate);
    for (const auto& a : f.atoms()) {
      if (!known_atoms.count(a)) return fallback();
    }
    TranslationResult r;
    r.formula_text = candidate;
    r.source = TranslationSource::Llm;
    r.raw_model_output = raw;
    return r;
  } catch (const NoGoalsRecognized&) {
    throw;
  } catch (const std::exception&) {
    return fallback();
  }
}

}  // namespace ltlplan
