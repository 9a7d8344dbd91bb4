#include "vinsta/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "vinsta/error.hpp"
#include "vinsta/llm/json_extract.hpp"
#include "vinsta/text.hpp"

namespace vinsta::eval {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::optional<bool> word_verdict(std::string_view word) {
  const auto w = lower(word);
  if (w == "yes" || w == "true" || w == "correct") return true;
  if (w == "no" || w == "false" || w == "incorrect") return false;
  return std::nullopt;
}

std::string answer_text(const std::optional<Answer>& answer) {
  if (!answer) return "";
  if (const auto* s = std::get_if<std::string>(&*answer)) return *s;
  return std::string(1, option_letter(std::get<std::size_t>(*answer)));
}

}  // namespace

double eval_closed(const std::vector<io::ResultRecord>& records) {
  if (records.empty()) throw InputError("cannot compute accuracy over an empty result set");
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (!r.ground_truth) throw InputError("record " + r.task_id + " has no ground truth");
    if (r.correct.value_or(r.prediction == r.ground_truth)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(records.size());
}

std::optional<bool> parse_verdict(std::string_view completion) {
  if (const auto field = llm::extract_json_field(completion, "pred")) {
    if (field->is_boolean()) return field->get<bool>();
    if (field->is_string()) {
      if (auto v = word_verdict(text::trim(field->get_ref<const std::string&>()))) return v;
    }
  }
  auto rest = text::trim(completion);
  std::size_t n = 0;
  while (n < rest.size() && std::isalpha(static_cast<unsigned char>(rest[n]))) ++n;
  return word_verdict(rest.substr(0, n));
}

std::string judge_prompt(const io::ResultRecord& record, const PromptTemplate& tmpl) {
  return render(tmpl, Bindings{{"question", record.question},
                               {"ground_truth", answer_text(record.ground_truth)},
                               {"prediction", answer_text(record.prediction)}});
}

JudgeReport eval_open_llm_judge(const std::vector<io::ResultRecord>& records, const PromptTemplate& tmpl,
                                llm::Session& session) {
  if (records.empty()) throw InputError("cannot judge an empty result set");
  JudgeReport report;
  std::size_t correct = 0;
  for (const auto& r : records) {
    if (!r.ground_truth) throw InputError("record " + r.task_id + " has no ground truth");
    JudgeVerdict v;
    v.task_id = r.task_id;
    v.completion = session.ask(judge_prompt(r, tmpl), 0.0).text;
    const auto verdict = parse_verdict(v.completion);
    v.flagged = !verdict;
    v.correct = verdict.value_or(false);
    if (v.correct) ++correct;
    report.verdicts.push_back(std::move(v));
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
  return report;
}

std::vector<AblationRow> report_ablation(const std::vector<LabeledRuns>& result_sets) {
  if (result_sets.size() < 2) throw InputError("an ablation needs at least two labeled result sets");
  std::vector<AblationRow> rows;
  for (const auto& [label, runs] : result_sets) {
    if (runs.empty()) throw InputError("result set '" + label + "' has no runs");
    AblationRow row;
    row.label = label;
    for (const auto& run : runs) row.per_run.push_back(eval_closed(run));
    const double n = static_cast<double>(row.per_run.size());
    row.mean = std::accumulate(row.per_run.begin(), row.per_run.end(), 0.0) / n;
    if (row.per_run.size() > 1) {
      double ss = 0.0;
      for (double a : row.per_run) ss += (a - row.mean) * (a - row.mean);
      row.stddev = std::sqrt(ss / (n - 1.0));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string render_ablation_table(const std::vector<AblationRow>& rows) {
  std::size_t width = std::string_view("method").size();
  for (const auto& r : rows) width = std::max(width, r.label.size());
  const auto pad = [](std::string s, std::size_t w) {
    s.resize(std::max(s.size(), w), ' ');
    return s;
  };
  std::string out = pad("method", width) + "  runs  accuracy  stddev\n";
  for (const auto& r : rows) {
    out += pad(r.label, width) + "  " + pad(std::to_string(r.per_run.size()), 4) + "  " +
           pad(text::fixed(r.mean * 100.0, 2), 8) + "  " + (r.stddev ? text::fixed(*r.stddev * 100.0, 2) : "-") + "\n";
  }
  return out;
}

nlohmann::json ablation_to_json(const std::vector<AblationRow>& rows) {
  auto out = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json row = {{"label", r.label}, {"per_run", r.per_run}, {"mean", r.mean}};
    row["stddev"] = r.stddev ? nlohmann::json(*r.stddev) : nlohmann::json(nullptr);
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace vinsta::eval
