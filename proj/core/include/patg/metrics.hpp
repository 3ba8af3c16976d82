#pragma once

#include <string>
#include <vector>

#include "patg/corpus.hpp"

namespace patg {

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap. Recall divides by the reference n-gram count,
// precision by the candidate's; an empty denominator gives 0.
RougeScore rouge_n(const TokenList& candidate, const TokenList& reference, int n);

// Longest common subsequence variant.
RougeScore rouge_l(const TokenList& candidate, const TokenList& reference);

// Unigrams plus skip-bigrams with at most 4 intervening tokens.
RougeScore rouge_su4(const TokenList& candidate, const TokenList& reference);

double mae(const std::vector<double>& predictions, const std::vector<double>& truths);
double rmse(const std::vector<double>& predictions, const std::vector<double>& truths);

// Corpus-level report: arithmetic mean of per-pair scores.
struct GenerationScores {
  RougeScore rouge1, rouge2, rougeL, rougeSU4;
  std::size_t pairs = 0;
};

GenerationScores score_generation(const std::vector<TokenList>& candidates,
                                  const std::vector<TokenList>& references);

struct EvaluationReport {
  std::string system = "PATG";
  GenerationScores generation;
  double mae = 0.0;
  double rmse = 0.0;
  std::size_t rating_pairs = 0;
};

// Percentages with two decimals, one block per metric family.
std::string format_generation_table(const std::vector<EvaluationReport>& rows);
std::string format_rating_table(const std::vector<EvaluationReport>& rows);
// F1-only block matching the ablation table layout.
std::string format_ablation_table(const std::vector<EvaluationReport>& rows);
std::string report_to_json(const std::vector<EvaluationReport>& rows);

}  // namespace patg
