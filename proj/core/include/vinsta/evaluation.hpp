#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vinsta/io/result_record.hpp"
#include "vinsta/llm/client.hpp"
#include "vinsta/templates.hpp"

namespace vinsta::eval {

/// correct / total over multiple-choice records. Throws InputError on an
/// empty set or a record without ground truth.
double eval_closed(const std::vector<io::ResultRecord>& records);

/// true/false from a judge completion: a {'pred': ...} field, or a leading
/// yes/no/true/false word.
std::optional<bool> parse_verdict(std::string_view completion);

struct JudgeVerdict {
  std::string task_id;
  bool correct = false;
  bool flagged = false;
  std::string completion;
};

struct JudgeReport {
  double accuracy = 0.0;
  std::vector<JudgeVerdict> verdicts;
};

std::string judge_prompt(const io::ResultRecord& record, const PromptTemplate& tmpl);

/// Asks the judge model whether each free-text prediction matches its
/// ground truth. Unparseable verdicts count as incorrect and are flagged.
JudgeReport eval_open_llm_judge(const std::vector<io::ResultRecord>& records, const PromptTemplate& tmpl,
                                llm::Session& session);

struct AblationRow {
  std::string label;
  std::vector<double> per_run;
  double mean = 0.0;
  std::optional<double> stddev;  // sample stddev, absent for a single run
};

using LabeledRuns = std::pair<std::string, std::vector<std::vector<io::ResultRecord>>>;

/// Throws InputError for fewer than two labeled result sets.
std::vector<AblationRow> report_ablation(const std::vector<LabeledRuns>& result_sets);
std::string render_ablation_table(const std::vector<AblationRow>& rows);
nlohmann::json ablation_to_json(const std::vector<AblationRow>& rows);

}  // namespace vinsta::eval
