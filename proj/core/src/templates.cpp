#include "vinsta/templates.hpp"

#include <fstream>
#include <sstream>

#include "vinsta/digest.hpp"
#include "vinsta/error.hpp"
#include "vinsta/text.hpp"

namespace vinsta {
namespace {

constexpr TemplateId kAllIds[] = {
    TemplateId::action_summary,     TemplateId::object_summary,          TemplateId::answerability,
    TemplateId::question_answering, TemplateId::self_reflection,         TemplateId::answerability_open,
    TemplateId::question_answering_open, TemplateId::open_qa_judge,
};

// Walks `body` once, calling on_text for literal runs and on_field for each
// placeholder name.
template <typename OnText, typename OnField>
void scan(std::string_view body, OnText on_text, OnField on_field) {
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c == '{') {
      if (i + 1 < body.size() && body[i + 1] == '{') {
        on_text(std::string_view("{"));
        i += 2;
        continue;
      }
      const auto close = body.find('}', i + 1);
      if (close == std::string_view::npos) throw TemplateError("unterminated placeholder at offset " + std::to_string(i));
      const auto name = body.substr(i + 1, close - i - 1);
      if (name.empty() || name.find('{') != std::string_view::npos) {
        throw TemplateError("malformed placeholder at offset " + std::to_string(i));
      }
      on_field(name);
      i = close + 1;
    } else if (c == '}') {
      if (i + 1 < body.size() && body[i + 1] == '}') {
        on_text(std::string_view("}"));
        i += 2;
        continue;
      }
      throw TemplateError("single '}' at offset " + std::to_string(i));
    } else {
      const auto next = body.find_first_of("{}", i);
      const auto end = next == std::string_view::npos ? body.size() : next;
      on_text(body.substr(i, end - i));
      i = end;
    }
  }
}

std::pair<TemplateId, ModelFamily> parse_stem(std::string_view stem) {
  const auto dot = stem.find('.');
  if (dot == std::string_view::npos) throw TemplateError("template file name lacks a family: " + std::string(stem));
  return {parse_template_id(stem.substr(0, dot)), parse_model_family(stem.substr(dot + 1))};
}

PromptTemplate make_template(std::string_view stem, std::string body) {
  const auto [id, family] = parse_stem(stem);
  PromptTemplate t{id, family, std::move(body), {}};
  t.checksum = sha256_hex(t.body);
  placeholders(t.body);  // rejects malformed bodies early
  return t;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TemplateError("cannot read template file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string_view to_string(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::action_summary: return "action_summary";
    case TemplateId::object_summary: return "object_summary";
    case TemplateId::answerability: return "answerability";
    case TemplateId::question_answering: return "question_answering";
    case TemplateId::self_reflection: return "self_reflection";
    case TemplateId::answerability_open: return "answerability_open";
    case TemplateId::question_answering_open: return "question_answering_open";
    case TemplateId::open_qa_judge: return "open_qa_judge";
  }
  return "";
}

std::string_view to_string(ModelFamily family) noexcept {
  return family == ModelFamily::standard ? "standard" : "strict-json-coaxing";
}

TemplateId parse_template_id(std::string_view name) {
  for (TemplateId id : kAllIds) {
    if (to_string(id) == name) return id;
  }
  throw TemplateError("unknown template id: " + std::string(name));
}

ModelFamily parse_model_family(std::string_view name) {
  if (name == "standard") return ModelFamily::standard;
  if (name == "strict-json-coaxing" || name == "strict_json_coaxing") return ModelFamily::strict_json_coaxing;
  throw TemplateError("unknown model family: " + std::string(name));
}

std::vector<std::string> placeholders(std::string_view body) {
  std::vector<std::string> names;
  scan(body, [](std::string_view) {}, [&](std::string_view name) {
    for (const auto& n : names) {
      if (n == name) return;
    }
    names.emplace_back(name);
  });
  return names;
}

std::string render(const PromptTemplate& tmpl, const Bindings& bindings) {
  std::string out;
  out.reserve(tmpl.body.size());
  scan(tmpl.body, [&](std::string_view literal) { out.append(literal); },
       [&](std::string_view name) {
         const auto it = bindings.find(name);
         if (it == bindings.end()) {
           throw TemplateError("unbound placeholder {" + std::string(name) + "} in template " +
                               std::string(to_string(tmpl.id)));
         }
         out.append(it->second);
       });
  return out;
}

const TemplateSet& TemplateSet::builtin() {
  static const TemplateSet kBuiltin = [] {
    TemplateSet set;
    for (const auto& e : detail::embedded_templates()) set.add(make_template(e.stem, std::string(e.body)));
    return set;
  }();
  return kBuiltin;
}

TemplateSet TemplateSet::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw TemplateError("template directory not found: " + dir.string());
  TemplateSet set;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".txt") continue;
    set.add(make_template(entry.path().stem().string(), slurp(entry.path())));
  }

  const auto sums_path = dir / "SHA256SUMS";
  if (std::filesystem::exists(sums_path)) {
    std::istringstream sums(slurp(sums_path));
    std::string line;
    while (std::getline(sums, line)) {
      const auto trimmed = text::trim(line);
      if (trimmed.empty()) continue;
      const auto space = trimmed.find(' ');
      if (space == std::string_view::npos) throw TemplateError("malformed SHA256SUMS line: " + std::string(trimmed));
      const auto digest = trimmed.substr(0, space);
      auto file = text::trim(trimmed.substr(space));
      if (!file.empty() && file.front() == '*') file.remove_prefix(1);
      auto stem = file;
      if (stem.ends_with(".txt")) stem.remove_suffix(4);
      const auto [id, family] = parse_stem(stem);
      const auto it = set.templates_.find({id, family});
      if (it == set.templates_.end()) throw TemplateError("checksum listed for missing template " + std::string(file));
      if (it->second.checksum != digest) throw TemplateError("checksum mismatch for template " + std::string(file));
    }
  }
  return set;
}

const PromptTemplate& TemplateSet::get(TemplateId id, ModelFamily family) const {
  if (auto it = templates_.find({id, family}); it != templates_.end()) return it->second;
  if (auto it = templates_.find({id, ModelFamily::standard}); it != templates_.end()) return it->second;
  throw TemplateError("no template registered for " + std::string(to_string(id)));
}

bool TemplateSet::has_exact(TemplateId id, ModelFamily family) const {
  return templates_.contains({id, family});
}

std::vector<const PromptTemplate*> TemplateSet::all() const {
  std::vector<const PromptTemplate*> out;
  out.reserve(templates_.size());
  for (const auto& [key, tmpl] : templates_) out.push_back(&tmpl);
  return out;
}

void TemplateSet::add(PromptTemplate tmpl) {
  const std::pair key{tmpl.id, tmpl.family};
  templates_.insert_or_assign(key, std::move(tmpl));
}

}  // namespace vinsta
