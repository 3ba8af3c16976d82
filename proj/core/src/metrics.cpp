#include "patg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace patg {

namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts ngram_counts(const TokenList& tokens, int n) {
  NgramCounts counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i) + n)];
  return counts;
}

// Unigrams plus skip-bigrams with gap (intervening tokens) <= max_gap.
NgramCounts su_counts(const TokenList& tokens, int max_gap) {
  NgramCounts counts;
  for (const auto& tok : tokens) ++counts[{tok}];
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = i + 1; j < tokens.size() && j <= i + static_cast<std::size_t>(max_gap) + 1; ++j)
      ++counts[{tokens[i], tokens[j]}];
  }
  return counts;
}

int total(const NgramCounts& counts) {
  int sum = 0;
  for (const auto& [_, c] : counts) sum += c;
  return sum;
}

int clipped_overlap(const NgramCounts& a, const NgramCounts& b) {
  int overlap = 0;
  for (const auto& [gram, count] : a) {
    auto it = b.find(gram);
    if (it != b.end()) overlap += std::min(count, it->second);
  }
  return overlap;
}

RougeScore from_counts(int overlap, int candidate_total, int reference_total) {
  RougeScore score;
  score.recall = reference_total > 0 ? static_cast<double>(overlap) / reference_total : 0.0;
  score.precision = candidate_total > 0 ? static_cast<double>(overlap) / candidate_total : 0.0;
  double pr = score.precision + score.recall;
  score.f1 = pr > 0.0 ? 2.0 * score.precision * score.recall / pr : 0.0;
  return score;
}

}  // namespace

RougeScore rouge_n(const TokenList& candidate, const TokenList& reference, int n) {
  if (n < 1) throw Error("rouge_n: n must be >= 1");
  NgramCounts cand = ngram_counts(candidate, n);
  NgramCounts ref = ngram_counts(reference, n);
  return from_counts(clipped_overlap(cand, ref), total(cand), total(ref));
}

RougeScore rouge_l(const TokenList& candidate, const TokenList& reference) {
  std::size_t nc = candidate.size();
  std::size_t nr = reference.size();
  std::vector<std::vector<int>> lcs(nr + 1, std::vector<int>(nc + 1, 0));
  for (std::size_t i = 1; i <= nr; ++i) {
    for (std::size_t j = 1; j <= nc; ++j) {
      if (reference[i - 1] == candidate[j - 1])
        lcs[i][j] = lcs[i - 1][j - 1] + 1;
      else
        lcs[i][j] = std::max(lcs[i - 1][j], lcs[i][j - 1]);
    }
  }
  return from_counts(lcs[nr][nc], static_cast<int>(nc), static_cast<int>(nr));
}

RougeScore rouge_su4(const TokenList& candidate, const TokenList& reference) {
  NgramCounts cand = su_counts(candidate, 4);
  NgramCounts ref = su_counts(reference, 4);
  return from_counts(clipped_overlap(cand, ref), total(cand), total(ref));
}

double mae(const std::vector<double>& predictions, const std::vector<double>& truths) {
  if (predictions.empty() || predictions.size() != truths.size())
    throw Error("mae: prediction/truth lists must be non-empty and equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) sum += std::abs(predictions[i] - truths[i]);
  return sum / static_cast<double>(predictions.size());
}

double rmse(const std::vector<double>& predictions, const std::vector<double>& truths) {
  if (predictions.empty() || predictions.size() != truths.size())
    throw Error("rmse: prediction/truth lists must be non-empty and equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    double d = predictions[i] - truths[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(predictions.size()));
}

GenerationScores score_generation(const std::vector<TokenList>& candidates,
                                  const std::vector<TokenList>& references) {
  if (candidates.size() != references.size())
    throw Error("score_generation: candidate/reference count mismatch");
  GenerationScores scores;
  scores.pairs = candidates.size();
  if (candidates.empty()) return scores;
  auto accumulate = [](RougeScore& acc, const RougeScore& s) {
    acc.recall += s.recall;
    acc.precision += s.precision;
    acc.f1 += s.f1;
  };
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    accumulate(scores.rouge1, rouge_n(candidates[i], references[i], 1));
    accumulate(scores.rouge2, rouge_n(candidates[i], references[i], 2));
    accumulate(scores.rougeL, rouge_l(candidates[i], references[i]));
    accumulate(scores.rougeSU4, rouge_su4(candidates[i], references[i]));
  }
  auto normalize = [&](RougeScore& s) {
    s.recall /= static_cast<double>(scores.pairs);
    s.precision /= static_cast<double>(scores.pairs);
    s.f1 /= static_cast<double>(scores.pairs);
  };
  normalize(scores.rouge1);
  normalize(scores.rouge2);
  normalize(scores.rougeL);
  normalize(scores.rougeSU4);
  return scores;
}

namespace {
std::string pct(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << (100.0 * v);
  return out.str();
}

void append_cell(std::string& line, const std::string& cell, std::size_t width) {
  line += cell;
  if (cell.size() < width) line.append(width - cell.size(), ' ');
}
}  // namespace

std::string format_generation_table(const std::vector<EvaluationReport>& rows) {
  constexpr std::size_t kName = 20, kCell = 8;
  std::string out;
  std::string header1, header2;
  append_cell(header1, "", kName);
  for (const char* family : {"ROUGE-1", "ROUGE-2", "ROUGE-L", "ROUGE-SU4"})
    append_cell(header1, family, 3 * kCell);
  append_cell(header2, "System", kName);
  for (int i = 0; i < 4; ++i)
    for (const char* col : {"R", "P", "F1"}) append_cell(header2, col, kCell);
  out += header1 + "\n" + header2 + "\n";
  for (const auto& row : rows) {
    std::string line;
    append_cell(line, row.system, kName);
    for (const RougeScore* s : {&row.generation.rouge1, &row.generation.rouge2,
                                &row.generation.rougeL, &row.generation.rougeSU4}) {
      append_cell(line, pct(s->recall), kCell);
      append_cell(line, pct(s->precision), kCell);
      append_cell(line, pct(s->f1), kCell);
    }
    out += line + "\n";
  }
  return out;
}

std::string format_rating_table(const std::vector<EvaluationReport>& rows) {
  constexpr std::size_t kName = 20, kCell = 8;
  std::string out;
  std::string header;
  append_cell(header, "System", kName);
  append_cell(header, "MAE", kCell);
  append_cell(header, "RMSE", kCell);
  out += header + "\n";
  for (const auto& row : rows) {
    std::ostringstream cells;
    cells << std::fixed << std::setprecision(3);
    std::string line;
    append_cell(line, row.system, kName);
    cells << row.mae;
    append_cell(line, cells.str(), kCell);
    cells.str("");
    cells << row.rmse;
    append_cell(line, cells.str(), kCell);
    out += line + "\n";
  }
  return out;
}

std::string format_ablation_table(const std::vector<EvaluationReport>& rows) {
  constexpr std::size_t kName = 20, kCell = 8;
  std::string out;
  std::string header;
  append_cell(header, "System", kName);
  for (const char* col : {"R-1", "R-2", "R-L", "R-SU4"}) append_cell(header, col, kCell);
  out += header + "\n";
  for (const auto& row : rows) {
    std::string line;
    append_cell(line, row.system, kName);
    append_cell(line, pct(row.generation.rouge1.f1), kCell);
    append_cell(line, pct(row.generation.rouge2.f1), kCell);
    append_cell(line, pct(row.generation.rougeL.f1), kCell);
    append_cell(line, pct(row.generation.rougeSU4.f1), kCell);
    out += line + "\n";
  }
  return out;
}

std::string report_to_json(const std::vector<EvaluationReport>& rows) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& row : rows) {
    auto rouge = [](const RougeScore& s) {
      return nlohmann::json{{"recall", s.recall}, {"precision", s.precision}, {"f1", s.f1}};
    };
    doc.push_back({{"system", row.system},
                   {"pairs", row.generation.pairs},
                   {"rouge_1", rouge(row.generation.rouge1)},
                   {"rouge_2", rouge(row.generation.rouge2)},
                   {"rouge_l", rouge(row.generation.rougeL)},
                   {"rouge_su4", rouge(row.generation.rougeSU4)},
                   {"mae", row.mae},
                   {"rmse", row.rmse},
                   {"rating_pairs", row.rating_pairs}});
  }
  return doc.dump(2);
}

}  // namespace patg
