#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patg/error.hpp"

namespace patg {

using TokenList = std::vector<std::string>;

// One (user, item, rating, review, tips) tuple; the atomic training example.
struct InteractionRecord {
  std::string user_id;
  std::string item_id;
  int rating = 0;  // integer in [1, 5]
  TokenList review;
  TokenList tips;
};

// Lowercases ASCII and splits on whitespace and punctuation. Bytes >= 0x80
// are treated as word characters so UTF-8 text passes through unharmed.
TokenList tokenize(std::string_view text);

// Line-delimited record files: per line, tab-separated
// "user=...<TAB>item=...<TAB>rating=...<TAB>review=...<TAB>tips=...".
std::vector<InteractionRecord> ingest_corpus(const std::filesystem::path& path);
InteractionRecord parse_record_line(const std::string& line, std::size_t line_number);
std::string format_record_line(const InteractionRecord& rec);
void write_corpus(const std::filesystem::path& path, const std::vector<InteractionRecord>& records);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBos = 2;
  static constexpr int kEos = 3;
  static constexpr int kReservedCount = 4;

  // Keeps tokens with corpus frequency >= min_freq (counted over tips and
  // reviews), indices assigned by descending frequency then lexicographic
  // order, after the four reserved slots.
  static Vocabulary build(const std::vector<InteractionRecord>& records, int min_freq);

  int size() const { return static_cast<int>(words_.size()); }
  const std::string& word(int index) const { return words_.at(static_cast<std::size_t>(index)); }
  std::int64_t frequency(int index) const { return freqs_.at(static_cast<std::size_t>(index)); }
  // -1 when the token is unknown.
  int index_of(std::string_view token) const;
  int index_or_unk(std::string_view token) const;
  std::vector<int> encode(const TokenList& tokens) const;  // unknown -> kUnk
  TokenList decode(const std::vector<int>& ids) const;     // reserved tokens skipped

  // One "index<TAB>word<TAB>frequency" per line.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && freqs_ == other.freqs_;
  }

 private:
  Vocabulary() = default;
  void emplace(std::string word, std::int64_t freq);

  std::vector<std::string> words_;
  std::vector<std::int64_t> freqs_;
  std::map<std::string, int, std::less<>> index_;
};

enum class Role { user, item };
enum class Source { tips, reviews };

// Binary bag-of-words presence vector over the global vocabulary.
struct BowVector {
  Eigen::VectorXd values;
  Role role = Role::user;
  Source source = Source::tips;
  std::string owner_id;
};

// Sorted persona-word indices for a (user, item) pair, valid in the global
// vocabulary and excluding reserved slots.
struct LocalVocabulary {
  std::string user_id;
  std::string item_id;
  std::vector<int> word_indices;

  bool empty() const { return word_indices.empty(); }
};

// Per-owner history lookup built once over a record set.
class CorpusIndex {
 public:
  explicit CorpusIndex(const std::vector<InteractionRecord>& records);

  bool has_user(std::string_view id) const { return users_.contains(std::string(id)); }
  bool has_item(std::string_view id) const { return items_.contains(std::string(id)); }
  std::vector<std::string> user_ids() const;
  std::vector<std::string> item_ids() const;

  // All historical texts of one owner for one source; throws on unknown owner.
  const std::vector<TokenList>& history(Role role, Source source, const std::string& owner_id) const;

 private:
  struct OwnerHistory {
    std::vector<TokenList> tips;
    std::vector<TokenList> reviews;
  };
  const OwnerHistory& owner(Role role, const std::string& id) const;

  std::map<std::string, OwnerHistory> users_;
  std::map<std::string, OwnerHistory> items_;
};

// Entry j is 1 iff vocabulary word j occurs in any of the owner's texts of
// the given source; reserved indices stay 0. Throws on unknown owner.
BowVector aggregate_bow(const CorpusIndex& index, const Vocabulary& vocab, Role role, Source source,
                        const std::string& owner_id);

// Union of user and item historical tips words, minus stopwords and words
// whose combined owner-history frequency is below min_freq, mapped to
// global indices. Throws on unknown owner.
LocalVocabulary build_local_vocabulary(const CorpusIndex& index, const Vocabulary& vocab,
                                       const std::string& user_id, const std::string& item_id,
                                       const std::set<std::string>& stopwords, int min_freq);

struct CorpusSplit {
  std::vector<InteractionRecord> train;
  std::vector<InteractionRecord> validation;
  std::vector<InteractionRecord> test;
};

// Deterministic shuffle under seed; validation and test get floor(n/10)
// records each, the remainder goes to train.
CorpusSplit split_corpus(const std::vector<InteractionRecord>& records, std::uint64_t seed);

const std::set<std::string>& default_stopwords();
std::set<std::string> load_stopwords(const std::filesystem::path& path);

// Synthetic corpus for desk-scale experiments. Band 0 covers ratings 1-2,
// band 1 rating 3, band 2 ratings 4-5. When profiles or lexicons are left
// empty they are filled in deterministically from the seed; profiles built
// that way are disjoint across users.
struct SyntheticCorpusSpec {
  int n_users = 20;
  int n_items = 10;
  int vocab_size = 220;
  std::uint64_t seed = 1;
  std::vector<std::array<std::vector<std::string>, 3>> style_profiles;  // per user, per band
  std::vector<std::string> positive_lexicon;
  std::vector<std::string> negative_lexicon;
  std::vector<std::string> neutral_lexicon;
};

// Fills defaulted fields of the spec in place and returns one record per
// (user, item) pair. Tips draw all their tokens from the writing user's
// band profile; identical spec and seed give byte-identical corpora.
std::vector<InteractionRecord> generate_synthetic_corpus(SyntheticCorpusSpec& spec);

inline int rating_band(int rating) { return rating <= 2 ? 0 : (rating == 3 ? 1 : 2); }
std::string synthetic_user_id(int u);
std::string synthetic_item_id(int i);

}  // namespace patg
