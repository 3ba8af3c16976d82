#include "patg/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "patg/rng.hpp"

namespace patg {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path.string());
  return in;
}

}  // namespace

TokenList tokenize(std::string_view text) {
  TokenList tokens;
  std::string current;
  for (unsigned char c : text) {
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

InteractionRecord parse_record_line(const std::string& line, std::size_t line_number) {
  auto fail = [&](const std::string& why) {
    throw Error("line " + std::to_string(line_number) + ": " + why);
  };

  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  static const char* kKeys[] = {"user", "item", "rating", "review", "tips"};
  if (fields.size() != 5) fail("expected 5 tab-separated fields, got " + std::to_string(fields.size()));
  std::array<std::string, 5> values;
  for (std::size_t i = 0; i < 5; ++i) {
    std::string prefix = std::string(kKeys[i]) + "=";
    if (fields[i].rfind(prefix, 0) != 0) fail("field " + std::to_string(i + 1) + " must start with '" + prefix + "'");
    values[i] = fields[i].substr(prefix.size());
  }

  InteractionRecord rec;
  rec.user_id = values[0];
  rec.item_id = values[1];
  if (rec.user_id.empty()) fail("empty user id");
  if (rec.item_id.empty()) fail("empty item id");
  try {
    std::size_t used = 0;
    rec.rating = std::stoi(values[2], &used);
    if (used != values[2].size()) fail("rating is not an integer: '" + values[2] + "'");
  } catch (const std::logic_error&) {
    fail("rating is not an integer: '" + values[2] + "'");
  }
  if (rec.rating < 1 || rec.rating > 5)
    fail("rating " + std::to_string(rec.rating) + " outside [1,5]");
  rec.review = tokenize(values[3]);
  rec.tips = tokenize(values[4]);
  if (rec.tips.empty()) fail("tips empty after tokenization");
  return rec;
}

std::vector<InteractionRecord> ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::vector<InteractionRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    records.push_back(parse_record_line(line, line_number));
  }
  return records;
}

namespace {
std::string join(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}
}  // namespace

std::string format_record_line(const InteractionRecord& rec) {
  std::ostringstream out;
  out << "user=" << rec.user_id << "\titem=" << rec.item_id << "\trating=" << rec.rating
      << "\treview=" << join(rec.review) << "\ttips=" << join(rec.tips);
  return out.str();
}

void write_corpus(const std::filesystem::path& path, const std::vector<InteractionRecord>& records) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path.string());
  for (const auto& rec : records) out << format_record_line(rec) << "\n";
}

void Vocabulary::emplace(std::string word, std::int64_t freq) {
  index_.emplace(word, static_cast<int>(words_.size()));
  words_.push_back(std::move(word));
  freqs_.push_back(freq);
}

Vocabulary Vocabulary::build(const std::vector<InteractionRecord>& records, int min_freq) {
  if (records.empty()) throw Error("build_vocabulary: empty corpus");
  if (min_freq < 1) throw Error("build_vocabulary: min_freq must be >= 1");

  std::unordered_map<std::string, std::int64_t> counts;
  for (const auto& rec : records) {
    for (const auto& tok : rec.tips) ++counts[tok];
    for (const auto& tok : rec.review) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  kept.reserve(counts.size());
  for (auto& [word, freq] : counts)
    if (freq >= min_freq) kept.emplace_back(word, freq);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.emplace("<pad>", 0);
  vocab.emplace("<unk>", 0);
  vocab.emplace("<bos>", 0);
  vocab.emplace("<eos>", 0);
  for (auto& [word, freq] : kept) vocab.emplace(std::move(word), freq);
  return vocab;
}

int Vocabulary::index_of(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

int Vocabulary::index_or_unk(std::string_view token) const {
  int idx = index_of(token);
  return idx < 0 ? kUnk : idx;
}

std::vector<int> Vocabulary::encode(const TokenList& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) ids.push_back(index_or_unk(tok));
  return ids;
}

TokenList Vocabulary::decode(const std::vector<int>& ids) const {
  TokenList tokens;
  for (int id : ids) {
    if (id >= kReservedCount && id < size()) tokens.push_back(word(id));
  }
  return tokens;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open file for writing: " + path.string());
  for (int i = 0; i < size(); ++i) out << i << '\t' << words_[static_cast<std::size_t>(i)] << '\t'
                                       << freqs_[static_cast<std::size_t>(i)] << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  Vocabulary vocab;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string idx_str, word, freq_str;
    if (!std::getline(fields, idx_str, '\t') || !std::getline(fields, word, '\t') ||
        !std::getline(fields, freq_str))
      throw Error("vocabulary line " + std::to_string(line_number) + ": expected index<TAB>word<TAB>frequency");
    if (std::stoi(idx_str) != vocab.size())
      throw Error("vocabulary line " + std::to_string(line_number) + ": indices must be consecutive");
    vocab.emplace(word, std::stoll(freq_str));
  }
  if (vocab.size() < kReservedCount) throw Error("vocabulary file missing reserved tokens");
  return vocab;
}

CorpusIndex::CorpusIndex(const std::vector<InteractionRecord>& records) {
  for (const auto& rec : records) {
    auto& user = users_[rec.user_id];
    auto& item = items_[rec.item_id];
    user.tips.push_back(rec.tips);
    user.reviews.push_back(rec.review);
    item.tips.push_back(rec.tips);
    item.reviews.push_back(rec.review);
  }
}

std::vector<std::string> CorpusIndex::user_ids() const {
  std::vector<std::string> ids;
  ids.reserve(users_.size());
  for (const auto& [id, _] : users_) ids.push_back(id);
  return ids;
}

std::vector<std::string> CorpusIndex::item_ids() const {
  std::vector<std::string> ids;
  ids.reserve(items_.size());
  for (const auto& [id, _] : items_) ids.push_back(id);
  return ids;
}

const CorpusIndex::OwnerHistory& CorpusIndex::owner(Role role, const std::string& id) const {
  const auto& table = role == Role::user ? users_ : items_;
  auto it = table.find(id);
  if (it == table.end())
    throw Error(std::string("unknown ") + (role == Role::user ? "user" : "item") + ": " + id);
  return it->second;
}

const std::vector<TokenList>& CorpusIndex::history(Role role, Source source,
                                                   const std::string& owner_id) const {
  const OwnerHistory& h = owner(role, owner_id);
  return source == Source::tips ? h.tips : h.reviews;
}

BowVector aggregate_bow(const CorpusIndex& index, const Vocabulary& vocab, Role role, Source source,
                        const std::string& owner_id) {
  BowVector bow;
  bow.role = role;
  bow.source = source;
  bow.owner_id = owner_id;
  bow.values = Eigen::VectorXd::Zero(vocab.size());
  for (const TokenList& text : index.history(role, source, owner_id)) {
    for (const auto& tok : text) {
      int idx = vocab.index_of(tok);
      if (idx >= Vocabulary::kReservedCount) bow.values(idx) = 1.0;
    }
  }
  return bow;
}

LocalVocabulary build_local_vocabulary(const CorpusIndex& index, const Vocabulary& vocab,
                                       const std::string& user_id, const std::string& item_id,
                                       const std::set<std::string>& stopwords, int min_freq) {
  std::map<std::string, int> counts;
  for (const TokenList& text : index.history(Role::user, Source::tips, user_id))
    for (const auto& tok : text) ++counts[tok];
  for (const TokenList& text : index.history(Role::item, Source::tips, item_id))
    for (const auto& tok : text) ++counts[tok];

  LocalVocabulary local;
  local.user_id = user_id;
  local.item_id = item_id;
  std::set<int> indices;
  for (const auto& [tok, count] : counts) {
    if (count < min_freq) continue;
    if (stopwords.contains(tok)) continue;
    int idx = vocab.index_of(tok);
    if (idx >= Vocabulary::kReservedCount) indices.insert(idx);
  }
  local.word_indices.assign(indices.begin(), indices.end());
  return local;
}

CorpusSplit split_corpus(const std::vector<InteractionRecord>& records, std::uint64_t seed) {
  if (records.size() < 3) throw Error("split_corpus: need at least 3 records");
  std::vector<std::size_t> order(records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    std::size_t j = rng.next_u64() % (i + 1);
    std::swap(order[i], order[j]);
  }

  std::size_t n = records.size();
  std::size_t n_val = n / 10;
  std::size_t n_test = n / 10;
  std::size_t n_train = n - n_val - n_test;

  CorpusSplit split;
  for (std::size_t k = 0; k < n; ++k) {
    const InteractionRecord& rec = records[order[k]];
    if (k < n_train)
      split.train.push_back(rec);
    else if (k < n_train + n_val)
      split.validation.push_back(rec);
    else
      split.test.push_back(rec);
  }
  return split;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in = open_for_read(path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    TokenList tokens = tokenize(line);
    if (tokens.size() == 1) words.insert(tokens[0]);
  }
  return words;
}

}  // namespace patg
