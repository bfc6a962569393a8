#include "denograph/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "denograph/errors.hpp"

namespace dg {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string lower(std::string s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return s;
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line,
                            const std::string& what) {
  throw DataError(path + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_or_throw(const std::string& path, bool binary = false) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw DataError("cannot open file: " + path);
  return in;
}

}  // namespace

const std::set<std::string>& pos_tag_set() {
  static const std::set<std::string> tags = {
      "CC", "CD",  "DT",  "EX",  "FW",  "IN",   "JJ",  "JJR", "JJS",
      "MD", "NN",  "NNS", "NNP", "NNPS", "PDT", "POS", "PRP", "PRP$",
      "RB", "RBR", "RBS", "RP",  "SYM", "TO",   "UH",  "VB",  "VBD",
      "VBG", "VBN", "VBP", "VBZ", "WDT", "WP",  "WP$", "WRB", "PUNCT"};
  return tags;
}

const std::set<std::string>& chunk_label_set() {
  static const std::set<std::string> labels = {"B-NP", "I-NP", "B-PP",
                                               "B-VP", "I-VP", "O"};
  return labels;
}

bool is_noun_tag(const std::string& pos) {
  return pos == "NN" || pos == "NNS" || pos == "NNP" || pos == "NNPS";
}

bool is_verb_tag(const std::string& pos) {
  return pos == "VB" || pos == "VBD" || pos == "VBG" || pos == "VBN" ||
         pos == "VBP" || pos == "VBZ";
}

bool is_determiner_tag(const std::string& pos) {
  return pos == "DT" || pos == "PDT";
}

bool is_modifier_tag(const std::string& pos) {
  return pos == "JJ" || pos == "JJR" || pos == "JJS" || pos == "RB" ||
         pos == "RBR" || pos == "RBS";
}

// ---------------------------------------------------------------------------
// Captions

std::vector<CaptionRecord> load_captions(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<CaptionRecord> records;
  std::set<std::pair<std::string, std::string>> seen_keys;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 3)
      fail_line(path, lineno,
                "expected 3 tab-separated fields, got " +
                    std::to_string(fields.size()));

    CaptionRecord rec;
    rec.image_id = fields[0];
    rec.sentence_id = fields[1];
    if (rec.image_id.empty() || rec.sentence_id.empty())
      fail_line(path, lineno, "empty image or sentence id");

    auto key = std::make_pair(rec.image_id, rec.sentence_id);
    if (!seen_keys.insert(key).second)
      fail_line(path, lineno,
                "duplicate (image_id, sentence_id): (" + rec.image_id + ", " +
                    rec.sentence_id + ")");

    if (fields[2].empty()) fail_line(path, lineno, "empty token list");
    for (const std::string& tok : split(fields[2], ' ')) {
      if (tok.empty()) fail_line(path, lineno, "empty token");
      std::vector<std::string> sub = split(tok, '|');
      if (sub.size() != 4)
        fail_line(path, lineno, "token '" + tok +
                                    "' needs surface|lemma|POS|CHUNK");
      TaggedToken t{sub[0], sub[1], sub[2], sub[3]};
      if (t.surface.empty() || t.lemma.empty())
        fail_line(path, lineno, "empty surface or lemma in token '" + tok + "'");
      if (!pos_tag_set().count(t.pos))
        fail_line(path, lineno, "unknown POS tag '" + t.pos + "'");
      if (!chunk_label_set().count(t.chunk))
        fail_line(path, lineno, "unknown chunk label '" + t.chunk + "'");
      rec.tokens.push_back(std::move(t));
    }

    // BIO validity: I-X must continue a B-X or I-X of the same X.
    for (std::size_t i = 0; i < rec.tokens.size(); ++i) {
      const std::string& c = rec.tokens[i].chunk;
      if (c[0] != 'I') continue;
      std::string tail = c.substr(1);  // "-NP" or "-VP"
      bool ok = i > 0 && (rec.tokens[i - 1].chunk == "B" + tail ||
                          rec.tokens[i - 1].chunk == "I" + tail);
      if (!ok)
        fail_line(path, lineno, "invalid BIO sequence at token '" +
                                    rec.tokens[i].surface + "' (" + c + ")");
    }

    records.push_back(std::move(rec));
  }
  return records;
}

// ---------------------------------------------------------------------------
// Lexicons

void HypernymLexicon::add(const std::string& lemma,
                          const std::string& hypernym) {
  std::string k = lower(lemma), v = lower(hypernym);
  if (k.empty() || v.empty()) throw DataError("empty lexicon entry");
  if (k == v) throw DataError("lexicon maps '" + k + "' to itself");
  auto it = direct_.find(k);
  if (it != direct_.end() && it->second != v)
    throw DataError("conflicting lexicon entries for '" + k + "': '" +
                    it->second + "' vs '" + v + "'");
  direct_[k] = v;
  std::size_t words = 1 + std::count(k.begin(), k.end(), ' ');
  max_key_words_ = std::max(max_key_words_, words);
}

void HypernymLexicon::validate() const {
  for (const auto& [start, unused] : direct_) {
    (void)unused;
    std::vector<std::string> walk{start};
    std::set<std::string> seen{start};
    std::string cur = start;
    while (true) {
      auto it = direct_.find(cur);
      if (it == direct_.end()) break;
      cur = it->second;
      walk.push_back(cur);
      if (!seen.insert(cur).second) {
        std::string cycle;
        for (const auto& w : walk) cycle += (cycle.empty() ? "" : " -> ") + w;
        throw DataError("lexicon cycle: " + cycle);
      }
    }
  }
}

const std::string* HypernymLexicon::next(const std::string& lemma) const {
  auto it = direct_.find(lemma);
  return it == direct_.end() ? nullptr : &it->second;
}

std::vector<std::string> HypernymLexicon::chain(const std::string& lemma) const {
  std::vector<std::string> out;
  std::string cur = lower(lemma);
  // acyclic by validate(); the bound is belt and braces
  for (std::size_t step = 0; step <= direct_.size(); ++step) {
    const std::string* nxt = next(cur);
    if (!nxt) break;
    out.push_back(*nxt);
    cur = *nxt;
  }
  return out;
}

HypernymLexicon load_lexicon(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  HypernymLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 2)
      fail_line(path, lineno, "expected lemma<TAB>hypernym");
    try {
      lex.add(fields[0], fields[1]);
    } catch (const DataError& e) {
      fail_line(path, lineno, e.what());
    }
  }
  lex.validate();
  return lex;
}

void ReplacementLexicon::add(const std::string& from, const std::string& to) {
  if (from.empty() || to.empty()) throw DataError("empty replacement entry");
  map_[lower(from)] = lower(to);
}

void ReplacementLexicon::apply(std::vector<CaptionRecord>& records) const {
  if (map_.empty()) return;
  for (CaptionRecord& rec : records) {
    for (TaggedToken& tok : rec.tokens) {
      auto s = map_.find(lower(tok.surface));
      if (s != map_.end()) tok.surface = s->second;
      auto l = map_.find(lower(tok.lemma));
      if (l != map_.end()) tok.lemma = l->second;
    }
  }
}

ReplacementLexicon load_replacements(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  ReplacementLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 2)
      fail_line(path, lineno, "expected token<TAB>replacement");
    lex.add(fields[0], fields[1]);
  }
  return lex;
}

// ---------------------------------------------------------------------------
// Features

void FeatureStore::add(const std::string& image_id, Eigen::VectorXd vec,
                       Eigen::MatrixXd regions) {
  if (image_id.empty()) throw DataError("empty image id");
  if (index_.count(image_id))
    throw DataError("duplicate image id: " + image_id);
  if (vec.size() == 0) throw DataError("empty feature vector: " + image_id);
  if (dim_ == 0) dim_ = static_cast<int>(vec.size());
  if (vec.size() != dim_)
    throw DataError("dimension mismatch for '" + image_id + "': got " +
                    std::to_string(vec.size()) + ", expected " +
                    std::to_string(dim_));
  if (!vec.allFinite())
    throw DataError("non-finite feature value for '" + image_id + "'");
  if (regions.size() > 0) {
    if (regions.cols() != dim_)
      throw DataError("region dimension mismatch for '" + image_id + "'");
    if (!regions.allFinite())
      throw DataError("non-finite region value for '" + image_id + "'");
  }
  index_[image_id] = static_cast<int>(ids_.size());
  ids_.push_back(image_id);
  vectors_.push_back(std::move(vec));
  regions_.push_back(std::move(regions));
}

bool FeatureStore::contains(const std::string& image_id) const {
  return index_.count(image_id) != 0;
}

int FeatureStore::index_of(const std::string& image_id) const {
  auto it = index_.find(image_id);
  if (it == index_.end()) throw DataError("unknown image id: " + image_id);
  return it->second;
}

const Eigen::VectorXd& FeatureStore::vector_of(
    const std::string& image_id) const {
  return vectors_[index_of(image_id)];
}

const Eigen::MatrixXd& FeatureStore::regions_of(
    const std::string& image_id) const {
  return regions_[index_of(image_id)];
}

namespace {

constexpr char kFeatureMagic[4] = {'D', 'G', 'F', 'T'};

void write_u16_le(std::ostream& out, std::uint16_t v) {
  char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
  out.write(b, 2);
}

void write_u32_le(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void write_f32_le(std::ostream& out, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  write_u32_le(out, bits);
}

bool read_u16_le(std::istream& in, std::uint16_t& v) {
  unsigned char b[2];
  if (!in.read(reinterpret_cast<char*>(b), 2)) return false;
  v = static_cast<std::uint16_t>(b[0] | (b[1] << 8));
  return true;
}

bool read_u32_le(std::istream& in, std::uint32_t& v) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) return false;
  v = b[0] | (b[1] << 8) | (b[2] << 16) | (std::uint32_t{b[3]} << 24);
  return true;
}

bool read_f32_le(std::istream& in, float& f) {
  std::uint32_t bits;
  if (!read_u32_le(in, bits)) return false;
  std::memcpy(&f, &bits, 4);
  return true;
}

FeatureStore load_features_binary(const std::string& path) {
  std::ifstream in = open_or_throw(path, /*binary=*/true);
  char magic[4];
  in.read(magic, 4);
  std::uint32_t d = 0;
  if (!read_u32_le(in, d) || d == 0)
    throw DataError(path + ": bad feature header");

  FeatureStore store;
  while (true) {
    std::uint16_t id_len = 0;
    if (!read_u16_le(in, id_len)) break;  // clean EOF
    std::string id(id_len, '\0');
    if (!in.read(id.data(), id_len))
      throw DataError(path + ": truncated record id");
    Eigen::VectorXd vec(d);
    for (std::uint32_t i = 0; i < d; ++i) {
      float f;
      if (!read_f32_le(in, f))
        throw DataError(path + ": truncated vector for '" + id + "'");
      vec[i] = static_cast<double>(f);
    }
    std::uint16_t n_regions = 0;
    if (!read_u16_le(in, n_regions))
      throw DataError(path + ": truncated region count for '" + id + "'");
    Eigen::MatrixXd regions(n_regions, d);
    for (std::uint16_t r = 0; r < n_regions; ++r)
      for (std::uint32_t i = 0; i < d; ++i) {
        float f;
        if (!read_f32_le(in, f))
          throw DataError(path + ": truncated region for '" + id + "'");
        regions(r, i) = static_cast<double>(f);
      }
    store.add(id, std::move(vec), std::move(regions));
  }
  return store;
}

FeatureStore load_features_text(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  FeatureStore store;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 2)
      fail_line(path, lineno, "expected image_id<TAB>values");
    std::vector<std::string> parts = split(fields[1], ',');
    Eigen::VectorXd vec(parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) {
      try {
        std::size_t used = 0;
        vec[i] = std::stod(parts[i], &used);
        if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
      } catch (const std::exception&) {
        fail_line(path, lineno, "bad feature value '" + parts[i] + "'");
      }
    }
    try {
      store.add(fields[0], std::move(vec));
    } catch (const DataError& e) {
      fail_line(path, lineno, e.what());
    }
  }
  return store;
}

}  // namespace

FeatureStore load_features(const std::string& path) {
  std::ifstream probe = open_or_throw(path, /*binary=*/true);
  char magic[4] = {0, 0, 0, 0};
  probe.read(magic, 4);
  probe.close();
  if (std::memcmp(magic, kFeatureMagic, 4) == 0)
    return load_features_binary(path);
  return load_features_text(path);
}

void write_features_text(const FeatureStore& store, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  char buf[64];
  for (const std::string& id : store.ids()) {
    out << id << '\t';
    const Eigen::VectorXd& v = store.vector_of(id);
    for (int i = 0; i < v.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", v[i]);
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_features_binary(const FeatureStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out.write(kFeatureMagic, 4);
  write_u32_le(out, static_cast<std::uint32_t>(store.dim()));
  for (const std::string& id : store.ids()) {
    if (id.size() > 0xffff) throw DataError("image id too long: " + id);
    write_u16_le(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    const Eigen::VectorXd& v = store.vector_of(id);
    for (int i = 0; i < v.size(); ++i)
      write_f32_le(out, static_cast<float>(v[i]));
    const Eigen::MatrixXd& regions = store.regions_of(id);
    write_u16_le(out, static_cast<std::uint16_t>(regions.rows()));
    for (int r = 0; r < regions.rows(); ++r)
      for (int c = 0; c < regions.cols(); ++c)
        write_f32_le(out, static_cast<float>(regions(r, c)));
  }
}

}  // namespace dg
