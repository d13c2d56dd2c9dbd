#include "btsel/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <set>
#include <sstream>

#include "json.hpp"

#include "btsel/errors.hpp"

namespace btsel {

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
}

std::string location(const std::string& origin, std::size_t line_no) {
  return origin + ", line " + std::to_string(line_no + 1);
}

}  // namespace

bool utf8_validate(std::string_view text, std::size_t* error_pos) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    std::size_t extra;
    std::uint32_t cp, min_cp;
    if (b0 < 0x80) {
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1Fu;
      min_cp = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0Fu;
      min_cp = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07u;
      min_cp = 0x10000;
    } else {
      if (error_pos) *error_pos = i;
      return false;
    }
    if (i + extra >= n) {
      if (error_pos) *error_pos = i;
      return false;
    }
    for (std::size_t k = 1; k <= extra; ++k) {
      const auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) {
        if (error_pos) *error_pos = i;
        return false;
      }
      cp = (cp << 6) | (b & 0x3Fu);
    }
    if (cp < min_cp || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
      if (error_pos) *error_pos = i;
      return false;
    }
    i += extra + 1;
  }
  return true;
}

std::u32string utf8_decode(std::string_view text) {
  if (!utf8_validate(text)) throw DataError("invalid UTF-8 in text being decoded");
  std::u32string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
    } else if ((b0 & 0xE0) == 0xC0) {
      out.push_back(((b0 & 0x1Fu) << 6) | (static_cast<unsigned char>(text[i + 1]) & 0x3Fu));
      i += 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      out.push_back(((b0 & 0x0Fu) << 12) |
                    ((static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 6) |
                    (static_cast<unsigned char>(text[i + 2]) & 0x3Fu));
      i += 3;
    } else {
      out.push_back(((b0 & 0x07u) << 18) |
                    ((static_cast<unsigned char>(text[i + 1]) & 0x3Fu) << 12) |
                    ((static_cast<unsigned char>(text[i + 2]) & 0x3Fu) << 6) |
                    (static_cast<unsigned char>(text[i + 3]) & 0x3Fu));
      i += 4;
    }
  }
  return out;
}

Corpus parse_corpus(std::string_view text, const std::string& origin,
                    EmptyLinePolicy policy) {
  Corpus corpus;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    if (pos == text.size()) {
      break;  // no trailing fragment after the final LF
    }
    std::size_t eol = text.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() : eol + 1;

    std::size_t bad;
    if (!utf8_validate(line, &bad)) {
      throw DataError("invalid UTF-8 at " + location(origin, line_no) + ", byte " +
                      std::to_string(bad));
    }
    if (is_blank(line)) {
      switch (policy) {
        case EmptyLinePolicy::kSkip:
          break;
        case EmptyLinePolicy::kError:
          throw DataError("empty line at " + location(origin, line_no));
        case EmptyLinePolicy::kKeep:
          corpus.push_back(Sentence{{}, line_no});
          break;
      }
      ++line_no;
      continue;
    }

    Sentence sentence;
    sentence.line_no = line_no;
    std::size_t tok_start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ' ') {
        if (i == tok_start) {
          throw DataError("malformed spacing (consecutive, leading or trailing space) at " +
                          location(origin, line_no));
        }
        std::string_view tok = line.substr(tok_start, i - tok_start);
        if (tok.find('\t') != std::string_view::npos ||
            tok.find('\r') != std::string_view::npos) {
          throw DataError("token contains whitespace (tab or CR) at " +
                          location(origin, line_no) +
                          "; corpora must be LF-terminated and single-space tokenized");
        }
        sentence.tokens.emplace_back(tok);
        tok_start = i + 1;
      }
    }
    corpus.push_back(std::move(sentence));
    ++line_no;
  }
  return corpus;
}

Corpus load_corpus(const std::string& path, EmptyLinePolicy policy) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open corpus file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("I/O error while reading: " + path);
  return parse_corpus(buf.str(), path, policy);
}

void save_corpus(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open file for writing: " + path);
  for (const Sentence& s : corpus) {
    out << join_tokens(s) << '\n';
  }
  if (!out) throw DataError("I/O error while writing: " + path);
}

std::string join_tokens(const Sentence& s) {
  std::string joined;
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    if (i > 0) joined += ' ';
    joined += s.tokens[i];
  }
  return joined;
}

std::size_t total_tokens(const Corpus& corpus) {
  std::size_t n = 0;
  for (const Sentence& s : corpus) n += s.tokens.size();
  return n;
}

void lowercase_corpus(Corpus& corpus) {
  for (Sentence& s : corpus) {
    for (std::string& tok : s.tokens) {
      for (char& c : tok) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      }
    }
  }
}

MultiSourcePool::MultiSourcePool(Corpus targets, std::vector<std::string> system_names,
                                 std::vector<Corpus> sources)
    : targets_(std::move(targets)),
      system_names_(std::move(system_names)),
      sources_(std::move(sources)) {
  if (system_names_.empty()) throw DataError("pool must declare at least one system");
  if (sources_.size() != system_names_.size()) {
    throw DataError("pool has " + std::to_string(system_names_.size()) + " system names but " +
                    std::to_string(sources_.size()) + " source corpora");
  }
  std::set<std::string> seen;
  for (const auto& name : system_names_) {
    if (name.empty()) throw DataError("pool system name must be non-empty");
    if (!seen.insert(name).second) throw DataError("duplicate system name: \"" + name + "\"");
  }
  for (std::size_t i = 0; i < sources_.size(); ++i) {
    if (sources_[i].size() != targets_.size()) {
      throw DataError("pool alignment: system \"" + system_names_[i] + "\" has " +
                      std::to_string(sources_[i].size()) + " sentences but the target corpus has " +
                      std::to_string(targets_.size()));
    }
  }
}

std::size_t MultiSourcePool::system_index(std::string_view name) const {
  for (std::size_t i = 0; i < system_names_.size(); ++i) {
    if (system_names_[i] == name) return i;
  }
  throw DataError("unknown system: \"" + std::string(name) + "\"");
}

MultiSourcePool load_pool(const std::string& manifest_path, bool lowercase) {
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw DataError("cannot open pool manifest: " + manifest_path);
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed pool manifest " + manifest_path + ": " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("target") || !manifest.contains("systems") ||
      !manifest["target"].is_string() || !manifest["systems"].is_array() ||
      manifest["systems"].empty()) {
    throw DataError("pool manifest " + manifest_path +
                    " must be {\"target\": path, \"systems\": [{\"name\", \"source\"}, ...]}");
  }

  const auto base = std::filesystem::path(manifest_path).parent_path();
  auto resolve = [&base](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).string();
  };

  const std::string target_path = resolve(manifest["target"].get<std::string>());
  std::vector<std::string> names;
  std::vector<std::string> source_paths;
  std::set<std::string> seen;
  for (const auto& sys : manifest["systems"]) {
    if (!sys.is_object() || !sys.contains("name") || !sys.contains("source") ||
        !sys["name"].is_string() || !sys["source"].is_string()) {
      throw DataError("pool manifest " + manifest_path +
                      ": each system entry needs string fields \"name\" and \"source\"");
    }
    std::string name = sys["name"].get<std::string>();
    if (!seen.insert(name).second) {
      throw DataError("pool manifest " + manifest_path + ": duplicate system name: \"" + name +
                      "\"");
    }
    names.push_back(std::move(name));
    source_paths.push_back(resolve(sys["source"].get<std::string>()));
  }

  // Distinct files load concurrently; results are collected in manifest order
  // so the first failing file is reported deterministically.
  auto target_future = std::async(std::launch::async, [&target_path] {
    return load_corpus(target_path, EmptyLinePolicy::kKeep);
  });
  std::vector<std::future<Corpus>> source_futures;
  source_futures.reserve(source_paths.size());
  for (const auto& p : source_paths) {
    source_futures.push_back(std::async(
        std::launch::async, [&p] { return load_corpus(p, EmptyLinePolicy::kKeep); }));
  }
  Corpus targets = target_future.get();
  std::vector<Corpus> sources;
  sources.reserve(source_futures.size());
  for (auto& f : source_futures) sources.push_back(f.get());

  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].size() != targets.size()) {
      throw DataError("pool alignment: system \"" + names[i] + "\" (" + source_paths[i] + ") has " +
                      std::to_string(sources[i].size()) + " lines but target (" + target_path +
                      ") has " + std::to_string(targets.size()));
    }
  }

  if (lowercase) {
    lowercase_corpus(targets);
    for (auto& c : sources) lowercase_corpus(c);
  }
  return MultiSourcePool(std::move(targets), std::move(names), std::move(sources));
}

}  // namespace btsel
