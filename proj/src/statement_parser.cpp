#include "teamscope/statement_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "teamscope/corpus.hpp"
#include "teamscope/parallel.hpp"

namespace teamscope {
namespace {

bool is_upper(char c) { return std::isupper(static_cast<unsigned char>(c)) != 0; }
bool is_lower(char c) { return std::islower(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

enum class Tok { Word, Comma, Semicolon, Colon, Amp, End };

struct Token {
  Tok kind;
  std::string text;
};

std::vector<std::string> whitespace_chunks(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

std::string strip_wrapping(std::string s) {
  static constexpr std::string_view kWrap = "()[]\"'";
  while (!s.empty() && kWrap.find(s.front()) != std::string_view::npos) s.erase(s.begin());
  while (!s.empty() && kWrap.find(s.back()) != std::string_view::npos) s.pop_back();
  return s;
}

bool single_dotted_letter(std::string_view s) { return s.size() == 2 && is_upper(s[0]) && s[1] == '.'; }

// Splits text into words and structural punctuation. A trailing period ends
// the sentence unless it closes an initials token that is followed by more
// of the same sentence.
std::vector<Token> tokenize(std::string_view text) {
  std::vector<std::string> chunks;
  for (auto& c : whitespace_chunks(text)) {
    std::string s = strip_wrapping(std::move(c));
    if (!s.empty()) chunks.push_back(std::move(s));
  }
  // "M. R." -> "M.R."
  std::vector<std::string> merged;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    std::string s = chunks[i];
    if (single_dotted_letter(s)) {
      while (i + 1 < chunks.size() && single_dotted_letter(chunks[i + 1].substr(0, 2))) {
        s += chunks[++i];
        if (s.back() != '.') break;
      }
    }
    merged.push_back(std::move(s));
  }

  std::vector<Token> out;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    std::string s = merged[i];
    if (s == "&") {
      out.push_back({Tok::Amp, s});
      continue;
    }
    std::vector<Token> trailing;
    bool sentence_end = false;
    while (!s.empty()) {
      const char c = s.back();
      if (c == ',') {
        trailing.push_back({Tok::Comma, ","});
      } else if (c == ';') {
        trailing.push_back({Tok::Semicolon, ";"});
      } else if (c == ':') {
        trailing.push_back({Tok::Colon, ":"});
      } else if (c == '.' || c == '!' || c == '?') {
        const bool last_char = trailing.empty();
        if (c == '.' && looks_like_initials(s)) {
          if (last_char) {
            const bool next_starts_sentence =
                i + 1 >= merged.size() ||
                (is_upper(merged[i + 1].front()) && !looks_like_initials(strip_wrapping(merged[i + 1])));
            sentence_end = next_starts_sentence;
          }
          break;
        }
        if (last_char) sentence_end = true;
      } else {
        break;
      }
      s.pop_back();
    }
    if (!s.empty()) out.push_back({Tok::Word, s});
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it) out.push_back(*it);
    if (sentence_end) out.push_back({Tok::End, "."});
  }
  return out;
}

bool is_connector(const Token& t) {
  return t.kind == Tok::Comma || t.kind == Tok::Amp || (t.kind == Tok::Word && lower(t.text) == "and");
}

bool is_filler(const std::string& word) {
  static const std::set<std::string> kFillers = {"also", "both", "together", "each", "further", "then", "all"};
  const std::string w = lower(word);
  if (kFillers.count(w)) return true;
  return w.size() > 4 && w.ends_with("ly") && is_lower(word.front());
}

// Coordinated predicates ("designed and performed") must look like past-tense verbs.
bool is_coordinated_verb(const std::string& word) {
  static const std::set<std::string> kIrregularPast = {"wrote", "led", "did", "made", "gave", "read",
                                                       "ran",   "took", "built", "oversaw", "drew", "undertook"};
  if (word.empty() || !is_lower(word.front())) return false;
  const std::string w = lower(word);
  if (kIrregularPast.count(w)) return true;
  return w.size() > 3 && w.ends_with("ed");
}

struct MentionHit {
  std::size_t length = 0;  // tokens consumed
  const std::vector<std::string>* authors = nullptr;
};

// A mention (collective phrase or initials token) starting at tokens[i].
MentionHit mention_at(const std::vector<Token>& tokens, std::size_t i, const MentionMap& mentions) {
  if (i >= tokens.size() || tokens[i].kind != Tok::Word) return {};
  // Longest collective phrase first.
  MentionHit best;
  for (const auto& [key, ids] : mentions.mentions) {
    if (key.find(' ') == std::string::npos) continue;
    std::size_t k = 0, pos = 0;
    bool ok = true;
    while (ok && pos <= key.size()) {
      const auto sp = key.find(' ', pos);
      const std::string word = key.substr(pos, sp == std::string::npos ? std::string::npos : sp - pos);
      if (i + k >= tokens.size() || tokens[i + k].kind != Tok::Word || lower(tokens[i + k].text) != word) ok = false;
      ++k;
      if (sp == std::string::npos) break;
      pos = sp + 1;
    }
    if (ok && k > best.length) best = {k, &ids};
  }
  if (best.authors) return best;
  if (const auto* ids = mentions.find(tokens[i].text)) return {1, ids};
  if (const auto* ids = mentions.find(lower(tokens[i].text))) return {1, ids};
  return {};
}

class ClauseBuilder {
 public:
  ClauseBuilder(const MentionMap& mentions, StatementParse& out) : mentions_(mentions), out_(out) {}

  void add_subject(const std::vector<std::string>& ids) { subject_.insert(ids.begin(), ids.end()); }
  void clear_subject() { subject_.clear(); }
  bool has_subject() const { return !subject_.empty(); }

  void emit(const std::string& verb) {
    ParsedClause c;
    for (const auto& id : mentions_.order) {
      if (subject_.count(id)) c.authors.push_back(id);
    }
    c.verb = verb;
    out_.clauses.push_back(std::move(c));
  }

 private:
  const MentionMap& mentions_;
  StatementParse& out_;
  std::set<std::string> subject_;
};

void parse_colon_sentence(const std::vector<Token>& s, std::size_t colon, const MentionMap& mentions,
                          StatementParse& out) {
  std::vector<std::string> verbs;
  bool expect_coordinated = false;
  for (std::size_t i = 0; i < colon; ++i) {
    const Token& t = s[i];
    if (is_connector(t)) {
      expect_coordinated = !verbs.empty();
      continue;
    }
    if (t.kind != Tok::Word) continue;
    if (verbs.empty()) {
      if (!is_filler(t.text)) verbs.push_back(t.text);
    } else if (expect_coordinated && is_coordinated_verb(lower(t.text))) {
      verbs.push_back(t.text);
    }
    expect_coordinated = false;
  }
  ClauseBuilder b(mentions, out);
  for (std::size_t i = colon + 1; i < s.size();) {
    const MentionHit hit = mention_at(s, i, mentions);
    if (hit.authors) {
      b.add_subject(*hit.authors);
      i += hit.length;
    } else {
      ++i;
    }
  }
  if (verbs.empty()) return;
  if (!b.has_subject()) {
    out.unattributed += verbs.size();
    return;
  }
  for (const auto& v : verbs) b.emit(v);
}

void parse_plain_sentence(const std::vector<Token>& s, const MentionMap& mentions, StatementParse& out) {
  enum class State { Subject, Predicate, Orphan };
  State state = State::Subject;
  ClauseBuilder b(mentions, out);
  std::size_t i = 0;
  while (i < s.size()) {
    const Token& t = s[i];
    if (t.kind == Tok::Semicolon) {
      b.clear_subject();
      state = State::Subject;
      ++i;
      continue;
    }
    switch (state) {
      case State::Subject: {
        if (is_connector(t) || t.kind != Tok::Word) {
          ++i;
          break;
        }
        if (const MentionHit hit = mention_at(s, i, mentions); hit.authors) {
          b.add_subject(*hit.authors);
          i += hit.length;
          break;
        }
        if (is_filler(t.text) && b.has_subject()) {
          ++i;
          break;
        }
        if (b.has_subject()) {
          b.emit(t.text);
          state = State::Predicate;
        } else {
          ++out.unattributed;
          state = State::Orphan;
        }
        ++i;
        break;
      }
      case State::Predicate:
      case State::Orphan: {
        if (is_connector(t)) {
          std::size_t j = i + 1;
          while (j < s.size() && is_connector(s[j])) ++j;
          while (j < s.size() && s[j].kind == Tok::Word && is_filler(s[j].text) && !mention_at(s, j, mentions).authors) ++j;
          if (mention_at(s, j, mentions).authors) {
            b.clear_subject();
            state = State::Subject;
            i = j;
            break;
          }
          if (state == State::Predicate && j < s.size() && s[j].kind == Tok::Word &&
              is_coordinated_verb(s[j].text)) {
            b.emit(s[j].text);
            i = j + 1;
            break;
          }
        }
        ++i;
        break;
      }
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::string initials_of(std::string_view full_name) {
  std::string out;
  bool at_start = true;
  for (char c : full_name) {
    if (c == ' ' || c == '-' || c == '\t' || c == '.') {
      at_start = true;
      continue;
    }
    if (at_start && is_alpha(c)) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    at_start = false;
  }
  return out;
}

std::string normalize_initials(std::string_view token) {
  std::string out;
  for (char c : token) {
    if (is_alpha(c)) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return out;
}

bool looks_like_initials(std::string_view token) {
  while (!token.empty() && (token.back() == ',' || token.back() == ';' || token.back() == ':')) {
    token.remove_suffix(1);
  }
  if (token.empty()) return false;
  if (token.find('.') == std::string_view::npos) {
    return token.size() >= 2 && token.size() <= 4 && std::all_of(token.begin(), token.end(), is_upper);
  }
  // Dotted: segments of one capital optionally followed by one lowercase letter.
  std::size_t segments = 0;
  std::size_t i = 0;
  while (i < token.size()) {
    const char c = token[i];
    if (c == '.' || c == '-') {
      ++i;
      continue;
    }
    if (!is_upper(c)) return false;
    ++i;
    if (i < token.size() && is_lower(token[i])) ++i;
    if (i < token.size() && token[i] != '.' && token[i] != '-') return false;
    ++segments;
  }
  return segments >= 1 && segments <= 4;
}

const std::vector<std::string>* MentionMap::find(const std::string& token) const {
  auto it = mentions.find(token);
  return it == mentions.end() ? nullptr : &it->second;
}

MentionMap resolve_author_mentions(std::string_view statement, std::span<const BylineEntry> byline,
                                   std::span<const std::string> collective_phrases) {
  MentionMap m;
  std::vector<std::string> initials;
  for (const auto& b : byline) {
    m.order.push_back(b.id);
    initials.push_back(initials_of(b.name));
  }
  const auto tokens = tokenize(statement);
  std::set<std::string> unmatched, ambiguous;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (t.kind != Tok::Word) continue;
    // Collective phrases.
    for (const auto& phrase : collective_phrases) {
      std::size_t pos = 0, k = 0;
      bool ok = true;
      while (true) {
        const auto sp = phrase.find(' ', pos);
        const std::string word = phrase.substr(pos, sp == std::string::npos ? std::string::npos : sp - pos);
        if (i + k >= tokens.size() || tokens[i + k].kind != Tok::Word || lower(tokens[i + k].text) != word) {
          ok = false;
          break;
        }
        ++k;
        if (sp == std::string::npos) break;
        pos = sp + 1;
      }
      if (ok) m.mentions[phrase] = m.order;
    }
    if (!looks_like_initials(t.text) || m.mentions.count(t.text)) continue;
    const std::string norm = normalize_initials(t.text);
    std::vector<std::string> hits;
    for (std::size_t a = 0; a < byline.size(); ++a) {
      if (initials[a] == norm) hits.push_back(byline[a].id);
    }
    if (hits.empty()) {
      if (t.text.find('.') != std::string::npos) unmatched.insert(t.text);
      continue;
    }
    if (hits.size() > 1) ambiguous.insert(t.text);
    m.mentions[t.text] = std::move(hits);
  }
  m.unmatched.assign(unmatched.begin(), unmatched.end());
  m.ambiguous.assign(ambiguous.begin(), ambiguous.end());
  return m;
}

StatementParse parse_statement(std::string_view statement, const MentionMap& mentions) {
  StatementParse out;
  const auto tokens = tokenize(statement);
  std::vector<Token> sentence;
  auto flush = [&] {
    if (sentence.empty()) return;
    auto colon = std::find_if(sentence.begin(), sentence.end(), [](const Token& t) { return t.kind == Tok::Colon; });
    if (colon != sentence.end()) {
      parse_colon_sentence(sentence, static_cast<std::size_t>(colon - sentence.begin()), mentions, out);
    } else {
      parse_plain_sentence(sentence, mentions, out);
    }
    sentence.clear();
  };
  for (const auto& t : tokens) {
    if (t.kind == Tok::End) {
      flush();
    } else {
      sentence.push_back(t);
    }
  }
  flush();
  return out;
}

std::optional<double> PaperCoverage::match_fraction() const {
  if (verb_tokens == 0) return std::nullopt;
  return static_cast<double>(matched_tokens) / static_cast<double>(verb_tokens);
}

std::optional<double> CoverageReport::coverage() const {
  if (verb_tokens == 0) return std::nullopt;
  return static_cast<double>(matched_tokens) / static_cast<double>(verb_tokens);
}

std::optional<double> CoverageReport::mean_unique_activities() const {
  if (papers_parsed == 0) return std::nullopt;
  return static_cast<double>(unique_activity_total) / static_cast<double>(papers_parsed);
}

ProfileExtraction extract_paper_profiles(const PaperRecord& paper, const ActivityLexicon& lexicon) {
  ProfileExtraction out;
  std::vector<BylineEntry> byline;
  for (std::size_t i = 0; i < paper.authors.size(); ++i) byline.push_back({paper.authors[i], paper.author_names[i]});

  for (std::size_t i = 0; i < paper.authors.size(); ++i) {
    ActivityProfile p;
    p.paper_id = paper.id;
    p.author_id = paper.authors[i];
    p.position = i;
    p.team_size = paper.authors.size();
    p.corresponding = paper.is_corresponding(paper.authors[i]);
    out.profiles.push_back(std::move(p));
  }

  const std::string text = paper.statement.value_or("");
  const MentionMap mentions = resolve_author_mentions(text, byline, lexicon.collective_phrases());
  const StatementParse parsed = parse_statement(text, mentions);

  PaperCoverage cov{paper.id, 0, 0};
  for (const auto& clause : parsed.clauses) {
    ++cov.verb_tokens;
    const auto act = lexicon.canonicalize(clause.verb);
    if (act) ++cov.matched_tokens;
    for (const auto& author : clause.authors) {
      auto& prof = out.profiles[*paper.position_of(author)];
      if (act) {
        prof.activities.insert(*act);
      } else {
        prof.unmatched_verbs.push_back(lower(clause.verb));
      }
    }
  }

  ActivitySet all;
  for (const auto& p : out.profiles) all |= p.activities;
  auto& r = out.report;
  r.papers_parsed = 1;
  r.verb_tokens = cov.verb_tokens;
  r.matched_tokens = cov.matched_tokens;
  r.unattributed = parsed.unattributed;
  r.unmatched_mentions = mentions.unmatched.size();
  r.ambiguous_mentions = mentions.ambiguous.size();
  r.unique_activity_total = all.size();
  r.papers.push_back(std::move(cov));
  return out;
}

namespace {
bool has_text(const std::optional<std::string>& s) {
  return s && std::any_of(s->begin(), s->end(), [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
}
}  // namespace

ProfileExtraction extract_profiles(const Corpus& corpus, const ActivityLexicon& lexicon, std::size_t threads) {
  std::vector<std::size_t> with_statement;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (has_text(corpus.paper(i).statement)) with_statement.push_back(i);
  }
  std::vector<ProfileExtraction> per_paper(with_statement.size());
  parallel_for(with_statement.size(), threads, [&](std::size_t k) {
    per_paper[k] = extract_paper_profiles(corpus.paper(with_statement[k]), lexicon);
  });

  ProfileExtraction out;
  auto& r = out.report;
  for (auto& pp : per_paper) {
    for (auto& p : pp.profiles) out.profiles.push_back(std::move(p));
    r.papers_parsed += pp.report.papers_parsed;
    r.verb_tokens += pp.report.verb_tokens;
    r.matched_tokens += pp.report.matched_tokens;
    r.unattributed += pp.report.unattributed;
    r.unmatched_mentions += pp.report.unmatched_mentions;
    r.ambiguous_mentions += pp.report.ambiguous_mentions;
    r.unique_activity_total += pp.report.unique_activity_total;
    for (auto& c : pp.report.papers) r.papers.push_back(std::move(c));
  }
  return out;
}

}  // namespace teamscope
