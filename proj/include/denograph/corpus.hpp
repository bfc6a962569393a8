#pragma once

#include <Eigen/Core>

#include <map>
#include <set>
#include <string>
#include <vector>

namespace dg {

/// One token of a caption with its lemma, POS tag and BIO chunk label.
/// Tagging and chunking are consumed as input; this toolkit never computes
/// them. The POS tags come from a closed Penn-style coarse set
/// (see pos_tag_set()); chunk labels are B-NP, I-NP, B-PP, B-VP, I-VP, O.
struct TaggedToken {
  std::string surface;
  std::string lemma;
  std::string pos;
  std::string chunk;

  bool operator==(const TaggedToken&) const = default;
};

/// A caption: the tokens of one sentence describing one image.
struct CaptionRecord {
  std::string image_id;
  std::string sentence_id;
  std::vector<TaggedToken> tokens;
};

const std::set<std::string>& pos_tag_set();
const std::set<std::string>& chunk_label_set();

bool is_noun_tag(const std::string& pos);
bool is_verb_tag(const std::string& pos);
bool is_determiner_tag(const std::string& pos);
bool is_modifier_tag(const std::string& pos);  // adjectives and adverbs

/// Lemma -> next-more-generic lemma table. Keys may be multi-word phrases
/// ("crowd of people"); chains are validated to be acyclic at load time.
class HypernymLexicon {
 public:
  void add(const std::string& lemma, const std::string& hypernym);
  void validate() const;  // throws DataError on any cycle

  /// Next hypernym of `lemma`, or nullptr if none.
  const std::string* next(const std::string& lemma) const;

  /// Full chain for `lemma`, ordered increasingly generic.
  std::vector<std::string> chain(const std::string& lemma) const;

  std::size_t size() const { return direct_.size(); }
  bool empty() const { return direct_.empty(); }
  /// Longest key measured in whitespace-separated words.
  std::size_t max_key_words() const { return max_key_words_; }

 private:
  std::map<std::string, std::string> direct_;
  std::size_t max_key_words_ = 0;
};

/// Surface/lemma fix-ups applied to captions before anything else. This is
/// the deterministic stand-in for a spell-checking pass.
class ReplacementLexicon {
 public:
  void add(const std::string& from, const std::string& to);
  std::size_t size() const { return map_.size(); }
  void apply(std::vector<CaptionRecord>& records) const;

 private:
  std::map<std::string, std::string> map_;
};

/// Image feature vectors keyed by image id; all vectors share one dimension.
/// Region vectors are optional per image and only used by the referring-
/// expression evaluation.
class FeatureStore {
 public:
  void add(const std::string& image_id, Eigen::VectorXd vec,
           Eigen::MatrixXd regions = Eigen::MatrixXd());

  int dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool contains(const std::string& image_id) const;
  /// Ids in insertion (file) order.
  const std::vector<std::string>& ids() const { return ids_; }

  const Eigen::VectorXd& vector_of(const std::string& image_id) const;
  /// Rows are region vectors; may have zero rows.
  const Eigen::MatrixXd& regions_of(const std::string& image_id) const;

 private:
  int index_of(const std::string& image_id) const;

  int dim_ = 0;
  std::vector<std::string> ids_;
  std::map<std::string, int> index_;
  std::vector<Eigen::VectorXd> vectors_;
  std::vector<Eigen::MatrixXd> regions_;
};

/// Caption file: one record per line,
///   image_id<TAB>sentence_id<TAB>tok|lemma|POS|CHUNK tok|lemma|POS|CHUNK ...
std::vector<CaptionRecord> load_captions(const std::string& path);

/// Lexicon file: lemma<TAB>hypernym per line, UTF-8.
HypernymLexicon load_lexicon(const std::string& path);
ReplacementLexicon load_replacements(const std::string& path);

/// Feature files. Text: image_id<TAB>f1,f2,...,fd. Binary: magic "DGFT",
/// u32-LE dimension, then per record: u16-LE id length, id bytes, d f32-LE
/// values, u16-LE region count, then count x d f32-LE region values.
/// The loader sniffs the magic to pick the format.
FeatureStore load_features(const std::string& path);
void write_features_text(const FeatureStore& store, const std::string& path);
void write_features_binary(const FeatureStore& store, const std::string& path);

}  // namespace dg
