#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace btsel {

// One pre-tokenized sentence. Tokens are kept exactly as read from the file;
// no token contains whitespace. line_no is the 0-based line index in the
// source file, so skipped lines leave gaps in the numbering.
struct Sentence {
  std::vector<std::string> tokens;
  std::size_t line_no = 0;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const Sentence& other) const = default;
};

using Corpus = std::vector<Sentence>;

// What to do with empty / whitespace-only lines.
//   kSkip  — drop the line, keep original line numbers for the rest
//   kError — reject the file
//   kKeep  — store a zero-token sentence (pools need this to stay aligned)
enum class EmptyLinePolicy { kSkip, kError, kKeep };

// Reads a UTF-8, LF, one-sentence-per-line file with single-space token
// separation. Consecutive, leading or trailing spaces and tabs/CR inside a
// line are rejected: corpora are expected to be pre-tokenized externally.
Corpus load_corpus(const std::string& path, EmptyLinePolicy policy);

// Same parser over an in-memory buffer. `origin` is used in error messages.
Corpus parse_corpus(std::string_view text, const std::string& origin,
                    EmptyLinePolicy policy);

// One sentence per line, tokens joined by single spaces, LF endings.
void save_corpus(const std::string& path, const Corpus& corpus);

std::string join_tokens(const Sentence& s);

std::size_t total_tokens(const Corpus& corpus);

// ASCII lowercasing for the global --lowercase switch; bytes >= 0x80 are
// left untouched.
void lowercase_corpus(Corpus& corpus);

// Strict UTF-8 validation (rejects overlong forms, surrogates, > U+10FFFF).
bool utf8_validate(std::string_view text, std::size_t* error_pos = nullptr);

// Decodes to code points; throws DataError on invalid input.
std::u32string utf8_decode(std::string_view text);

// Target-side monolingual corpus plus one line-aligned synthetic source
// corpus per backtranslation system. Empty lines are kept as zero-token
// sentences so the 1:1 alignment is never broken; zero-token sources are
// ineligible for selection and always score 0. Immutable after construction.
class MultiSourcePool {
 public:
  MultiSourcePool(Corpus targets, std::vector<std::string> system_names,
                  std::vector<Corpus> sources);

  std::size_t num_targets() const { return targets_.size(); }
  std::size_t num_systems() const { return system_names_.size(); }
  std::size_t num_candidates() const { return targets_.size() * system_names_.size(); }

  const Corpus& targets() const { return targets_; }
  const std::vector<std::string>& system_names() const { return system_names_; }
  const std::string& system_name(std::size_t system) const { return system_names_[system]; }
  const Corpus& source(std::size_t system) const { return sources_[system]; }
  const Sentence& source_at(std::size_t system, std::size_t target_idx) const {
    return sources_[system][target_idx];
  }
  const Sentence& target_at(std::size_t target_idx) const { return targets_[target_idx]; }

  // Index of a system by name; throws DataError if absent.
  std::size_t system_index(std::string_view name) const;

 private:
  Corpus targets_;
  std::vector<std::string> system_names_;
  std::vector<Corpus> sources_;
};

// Loads a pool from a JSON manifest:
//   {"target": path, "systems": [{"name": str, "source": path}, ...]}
// Relative paths are resolved against the manifest's directory. Distinct
// files are loaded concurrently. Line counts are validated against the
// target corpus; mismatches report the offending file and both counts.
MultiSourcePool load_pool(const std::string& manifest_path, bool lowercase = false);

}  // namespace btsel
