#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace vinsta {

enum class TemplateId {
  action_summary,
  object_summary,
  answerability,
  question_answering,
  self_reflection,
  answerability_open,
  question_answering_open,
  open_qa_judge,
};

/// `standard` matches the prompts used with hosted chat models;
/// `strict_json_coaxing` adds sentences that insist on a parseable answer.
enum class ModelFamily { standard, strict_json_coaxing };

std::string_view to_string(TemplateId id) noexcept;
std::string_view to_string(ModelFamily family) noexcept;
TemplateId parse_template_id(std::string_view name);
ModelFamily parse_model_family(std::string_view name);

struct PromptTemplate {
  TemplateId id{};
  ModelFamily family{};
  std::string body;
  /// SHA-256 of body.
  std::string checksum;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

/// Placeholder names in order of first appearance. `{{` and `}}` are escapes.
std::vector<std::string> placeholders(std::string_view body);

/// Single-pass substitution of `{name}`; `{{`/`}}` collapse to one brace.
/// Throws TemplateError on an unbound placeholder or a stray brace.
std::string render(const PromptTemplate& tmpl, const Bindings& bindings);

/// Registry of templates keyed by (id, family). Lookups for a family that
/// has no dedicated variant fall back to the standard one.
class TemplateSet {
 public:
  /// Templates compiled into the library.
  static const TemplateSet& builtin();

  /// Loads `<id>.<family>.txt` files from `dir` and checks them against
  /// `dir/SHA256SUMS` when that file exists.
  static TemplateSet load(const std::filesystem::path& dir);

  const PromptTemplate& get(TemplateId id, ModelFamily family) const;
  bool has_exact(TemplateId id, ModelFamily family) const;
  std::vector<const PromptTemplate*> all() const;

 private:
  void add(PromptTemplate tmpl);

  std::map<std::pair<TemplateId, ModelFamily>, PromptTemplate> templates_;
};

namespace detail {
struct EmbeddedTemplate {
  std::string_view stem;
  std::string_view body;
};
const std::vector<EmbeddedTemplate>& embedded_templates();
}  // namespace detail

}  // namespace vinsta
