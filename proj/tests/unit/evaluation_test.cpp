#include <gtest/gtest.h>

#include "vinsta/error.hpp"
#include "vinsta/evaluation.hpp"
#include "vinsta/llm/backends.hpp"

namespace vinsta::eval {
namespace {

io::ResultRecord closed(std::size_t prediction, std::size_t truth) {
  io::ResultRecord r;
  r.task_id = "t";
  r.question = "q";
  r.prediction = Answer{prediction};
  r.ground_truth = Answer{truth};
  r.correct = prediction == truth;
  return r;
}

io::ResultRecord open(std::string prediction, std::string truth) {
  io::ResultRecord r;
  r.task_id = "o";
  r.question = "What is C doing?";
  r.prediction = Answer{std::move(prediction)};
  r.ground_truth = Answer{std::move(truth)};
  return r;
}

TEST(Closed, Accuracy) {
  EXPECT_DOUBLE_EQ(eval_closed({closed(1, 1), closed(0, 1), closed(2, 2), closed(3, 4)}), 0.5);
  EXPECT_THROW(eval_closed({}), InputError);
  auto missing = closed(1, 1);
  missing.ground_truth.reset();
  EXPECT_THROW(eval_closed({missing}), InputError);
}

TEST(Closed, FailedRecordsCountAsWrong) {
  auto failed = closed(0, 0);
  failed.prediction.reset();
  failed.correct = false;
  failed.failed = true;
  EXPECT_DOUBLE_EQ(eval_closed({failed, closed(1, 1)}), 0.5);
}

TEST(Verdict, Parsing) {
  EXPECT_EQ(parse_verdict("{'pred': 'yes'}"), true);
  EXPECT_EQ(parse_verdict("{'pred': False}"), false);
  EXPECT_EQ(parse_verdict("{\"pred\": \"Incorrect\"}"), false);
  EXPECT_EQ(parse_verdict("Yes, the answers match."), true);
  EXPECT_EQ(parse_verdict("  no"), false);
  EXPECT_EQ(parse_verdict("Perhaps"), std::nullopt);
}

TEST(Judge, ScoresOpenAnswers) {
  auto backend = std::make_shared<llm::ScriptedBackend>(std::vector<std::string>{"{'pred': 'yes'}", "unclear"});
  llm::ChatClient client(backend);
  llm::Session session(client, "judge");
  const auto& tmpl = TemplateSet::builtin().get(TemplateId::open_qa_judge, ModelFamily::standard);
  const auto report = eval_open_llm_judge({open("making tea", "preparing tea"), open("x", "y")}, tmpl, session);
  EXPECT_DOUBLE_EQ(report.accuracy, 0.5);
  EXPECT_TRUE(report.verdicts[1].flagged);
  EXPECT_FALSE(report.verdicts[1].correct);
  const auto requests = backend->requests();
  EXPECT_EQ(requests[0].temperature, 0.0);
  EXPECT_NE(requests[0].messages[0].content.find("Predicted Answer: making tea"), std::string::npos);
  EXPECT_NE(requests[0].messages[0].content.find("Correct Answer: preparing tea"), std::string::npos);
}

TEST(Ablation, RowsAndTable) {
  const std::vector<io::ResultRecord> half{closed(1, 1), closed(0, 1)};
  const std::vector<io::ResultRecord> full{closed(1, 1), closed(2, 2)};
  const auto rows = report_ablation({{"uniform", {half, half}}, {"cdpcknn", {full, half, full}}});
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_DOUBLE_EQ(rows[0].mean, 0.5);
  EXPECT_DOUBLE_EQ(*rows[0].stddev, 0.0);
  EXPECT_NEAR(rows[1].mean, 5.0 / 6.0, 1e-12);
  EXPECT_NEAR(*rows[1].stddev, std::sqrt((2 * std::pow(1.0 / 6, 2) + std::pow(2.0 / 6, 2)) / 2), 1e-12);
  EXPECT_EQ(render_ablation_table(rows),
            "method   runs  accuracy  stddev\n"
            "uniform  2     50.00     0.00\n"
            "cdpcknn  3     83.33     28.87\n");
  EXPECT_EQ(ablation_to_json(rows)[1]["label"], "cdpcknn");

  const auto single = report_ablation({{"a", {half}}, {"b", {full}}});
  EXPECT_FALSE(single[0].stddev);
  EXPECT_THROW(report_ablation({{"a", {half}}}), InputError);
}

}  // namespace
}  // namespace vinsta::eval
