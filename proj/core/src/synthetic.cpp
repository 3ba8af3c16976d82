#include <algorithm>
#include <set>

#include "patg/corpus.hpp"
#include "patg/rng.hpp"

namespace patg {

namespace {

const char* kSyllables[] = {"ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du",
                            "ka", "ke", "ki", "ko", "ku", "la", "le", "li", "lo", "lu",
                            "ma", "me", "mi", "mo", "mu", "na", "ne", "ni", "no", "nu",
                            "ra", "re", "ri", "ro", "ru", "sa", "se", "si", "so", "su",
                            "ta", "te", "ti", "to", "tu", "za", "ze", "zi", "zo", "zu"};
constexpr int kSyllableCount = 50;

// Pronounceable pseudo-word, distinct per n, never colliding with the real
// sentiment lexicons (those are all shorter or longer than 3 syllables).
std::string make_word(int n) {
  std::string w;
  w += kSyllables[n % kSyllableCount];
  w += kSyllables[(n / kSyllableCount) % kSyllableCount];
  w += kSyllables[(n / (kSyllableCount * kSyllableCount)) % kSyllableCount];
  return w;
}

std::vector<std::string> default_positive() {
  return {"perfect",  "excellent", "great",       "wonderful", "amazing",
          "fantastic", "awesome",  "superb",      "terrific",  "brilliant",
          "outstanding", "splendid", "marvelous", "delightful", "charming",
          "pleasant", "stellar",   "lovely",      "impressive", "flawless"};
}

std::vector<std::string> default_negative() {
  return {"terrible", "awful",    "horrible",      "useless", "worthless",
          "broken",   "flimsy",   "defective",     "shoddy",  "faulty",
          "dreadful", "pathetic", "disappointing", "lousy",   "atrocious",
          "abysmal",  "inferior", "unusable",      "wobbly",  "miserable"};
}

std::vector<std::string> default_neutral() {
  return {"okay",     "average",  "decent",   "fair",       "ordinary",
          "moderate", "plain",    "standard", "typical",    "usual",
          "common",   "middling", "passable", "adequate",   "acceptable",
          "regular",  "neutral",  "workable", "reasonable", "tolerable"};
}

std::vector<int> permutation(int n, Rng& rng) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    int j = rng.uniform_int(i + 1);
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  return perm;
}

std::string padded_id(char prefix, int n, int total) {
  int width = 2;
  for (int v = total; v >= 100; v /= 10) ++width;
  std::string digits = std::to_string(n);
  std::string out(1, prefix);
  out.append(static_cast<std::size_t>(width) - std::min<std::size_t>(digits.size(), width), '0');
  out += digits;
  return out;
}

}  // namespace

std::string synthetic_user_id(int u) { return padded_id('u', u, 100); }
std::string synthetic_item_id(int i) { return padded_id('i', i, 100); }

std::vector<InteractionRecord> generate_synthetic_corpus(SyntheticCorpusSpec& spec) {
  if (spec.n_users < 0 || spec.n_items < 0) throw Error("synthetic corpus: negative counts");
  Rng rng(spec.seed);

  if (spec.positive_lexicon.empty()) spec.positive_lexicon = default_positive();
  if (spec.negative_lexicon.empty()) spec.negative_lexicon = default_negative();
  if (spec.neutral_lexicon.empty()) spec.neutral_lexicon = default_neutral();

  if (spec.style_profiles.empty()) {
    // One sentiment word per band plus two user-exclusive words. The
    // sentiment words are dealt out by a seeded permutation, so profiles
    // of the first n_users <= pool-size users are pairwise disjoint.
    std::vector<int> pos_perm = permutation(static_cast<int>(spec.positive_lexicon.size()), rng);
    std::vector<int> neg_perm = permutation(static_cast<int>(spec.negative_lexicon.size()), rng);
    std::vector<int> neu_perm = permutation(static_cast<int>(spec.neutral_lexicon.size()), rng);
    spec.style_profiles.resize(static_cast<std::size_t>(spec.n_users));
    for (int u = 0; u < spec.n_users; ++u) {
      auto& profile = spec.style_profiles[static_cast<std::size_t>(u)];
      auto pick = [u](const std::vector<std::string>& pool, const std::vector<int>& perm) {
        return pool[static_cast<std::size_t>(perm[static_cast<std::size_t>(u) % perm.size()])];
      };
      profile[0] = {pick(spec.negative_lexicon, neg_perm), make_word(u * 6 + 0), make_word(u * 6 + 1)};
      profile[1] = {pick(spec.neutral_lexicon, neu_perm), make_word(u * 6 + 2), make_word(u * 6 + 3)};
      profile[2] = {pick(spec.positive_lexicon, pos_perm), make_word(u * 6 + 4), make_word(u * 6 + 5)};
    }
  }
  if (static_cast<int>(spec.style_profiles.size()) < spec.n_users)
    throw Error("synthetic corpus: fewer style profiles than users");

  std::set<std::string> distinct;
  for (const auto& profile : spec.style_profiles)
    for (const auto& band : profile) distinct.insert(band.begin(), band.end());
  std::vector<std::array<std::string, 2>> item_words(static_cast<std::size_t>(spec.n_items));
  for (int i = 0; i < spec.n_items; ++i) {
    item_words[static_cast<std::size_t>(i)] = {make_word(200000 + i * 2), make_word(200000 + i * 2 + 1)};
    distinct.insert(item_words[static_cast<std::size_t>(i)][0]);
    distinct.insert(item_words[static_cast<std::size_t>(i)][1]);
  }
  if (static_cast<int>(distinct.size()) > spec.vocab_size)
    throw Error("synthetic corpus: vocab_size " + std::to_string(spec.vocab_size) +
                " is smaller than the " + std::to_string(distinct.size()) +
                " distinct profile and item words");

  // Rating is a generosity + quality blend, which keeps it learnable from
  // the persona histories at desk scale.
  auto rating_of = [](int u, int i) {
    int generosity = 1 + (u % 5);
    int quality = 1 + (i % 5);
    return (generosity + quality + 1) / 2;
  };

  std::vector<InteractionRecord> records;
  records.reserve(static_cast<std::size_t>(spec.n_users) * static_cast<std::size_t>(spec.n_items));
  for (int u = 0; u < spec.n_users; ++u) {
    const auto& profile = spec.style_profiles[static_cast<std::size_t>(u)];
    for (int i = 0; i < spec.n_items; ++i) {
      int rating = rating_of(u, i);
      const std::vector<std::string>& band_words = profile[static_cast<std::size_t>(rating_band(rating))];
      if (band_words.empty())
        throw Error("synthetic corpus: empty band profile for user " + std::to_string(u));

      InteractionRecord rec;
      rec.user_id = synthetic_user_id(u);
      rec.item_id = synthetic_item_id(i);
      rec.rating = rating;
      std::size_t n = band_words.size();
      std::size_t tip_len = std::min<std::size_t>(3, n);
      for (std::size_t j = 0; j < tip_len; ++j)
        rec.tips.push_back(band_words[(static_cast<std::size_t>(rating) + j) % n]);
      rec.review.push_back(item_words[static_cast<std::size_t>(i)][0]);
      rec.review.push_back(item_words[static_cast<std::size_t>(i)][1]);
      for (std::size_t j = 0; j < n; ++j)
        rec.review.push_back(band_words[(static_cast<std::size_t>(rating) + j) % n]);
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace patg
