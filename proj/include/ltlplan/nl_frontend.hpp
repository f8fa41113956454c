#pragma once

#include <optional>
#include <set>
#include <string>

namespace ltlplan {

enum class TranslationSource { Rules, Llm, LlmFallbackToRules };

struct TranslationResult {
  std::string formula_text;  // always parses under the LTL grammar
  TranslationSource source = TranslationSource::Rules;
  std::optional<std::string> raw_model_output;
};

struct LlmEndpointConfig {
  std::string base_url;    // e.g. http://localhost:8080
  std::string model_name;
  std::string api_key;     // read from LTLPLAN_LLM_API_KEY by the CLI
  double timeout_seconds = 10.0;
  int max_retries = 1;
  std::string prompt_template =
      "Translate the task into an LTL formula over the atoms {atoms}. "
      "Use only F, G, X, &, ||, ! and parentheses, and reply with the "
      "formula alone.\nTask: {task}";
};

/// Deterministic template translation: ordered goal mentions become an
/// F-chain, "or" between adjacent mentions folds a disjunctive stage, and
/// "avoid/never X after Y" emits the trigger-safety clause.
std::string translate_rules(const std::string& text,
                            const std::set<std::string>& known_atoms);

/// Asks a chat-completion endpoint, validates the reply against the LTL
/// grammar and the atom vocabulary, and falls back to translate_rules on
/// any failure.
TranslationResult translate_llm(const std::string& text,
                                const LlmEndpointConfig& cfg,
                                const std::set<std::string>& known_atoms);

/// Longest substring of the model reply drawn from the LTL token alphabet,
/// with markdown fences stripped. Exposed for tests.
std::string extract_formula_candidate(const std::string& raw);

}  // namespace ltlplan
