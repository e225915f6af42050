// Copyright 2026 The lexclust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lexclust/term_table.h"

#include <fstream>
#include <iterator>
#include <sstream>

#include "lexclust/error.h"

namespace lexclust {

TermTable TermTable::from_terms(std::vector<std::string> terms) {
    TermTable table;
    table.index_.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const auto& term = terms[i];
        if (term.empty()) {
            throw Error("empty term at index " + std::to_string(i));
        }
        if (!is_valid_utf8(term)) {
            throw Error("term at index " + std::to_string(i) + " is not valid UTF-8");
        }
        auto [it, inserted] = table.index_.emplace(term, static_cast<TermId>(i));
        if (!inserted) {
            throw Error("duplicate term \"" + term + "\" at indices " +
                        std::to_string(it->second) + " and " + std::to_string(i));
        }
    }
    table.terms_ = std::move(terms);
    return table;
}

const std::string& TermTable::term(TermId id) const {
    if (id >= terms_.size()) {
        throw Error("term id " + std::to_string(id) + " out of range (table size " +
                    std::to_string(terms_.size()) + ")");
    }
    return terms_[id];
}

std::optional<TermId> TermTable::find(std::string_view term) const {
    auto it = index_.find(std::string(term));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

TermId TermTable::id(std::string_view term) const {
    auto found = find(term);
    if (!found) {
        throw Error("unknown term \"" + std::string(term) + "\"");
    }
    return *found;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string contents{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) {
        throw Error("read failure on " + path.string());
    }
    return contents;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) {
        throw Error("write failure on " + path.string());
    }
}

std::vector<std::string> split_lines(std::string_view contents) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < contents.size()) {
        auto end = contents.find('\n', start);
        if (end == std::string_view::npos) {
            lines.emplace_back(contents.substr(start));
            break;
        }
        lines.emplace_back(contents.substr(start, end - start));
        start = end + 1;
    }
    return lines;
}

TermTable load_term_table(const std::filesystem::path& path) {
    auto lines = split_lines(read_file(path));
    // Line numbers in messages are 1-based.
    std::unordered_map<std::string_view, std::size_t> first_seen;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) {
            throw Error(path.string() + ":" + std::to_string(i + 1) + ": empty line");
        }
        if (!is_valid_utf8(lines[i])) {
            throw Error(path.string() + ":" + std::to_string(i + 1) + ": invalid UTF-8");
        }
        auto [it, inserted] = first_seen.emplace(lines[i], i);
        if (!inserted) {
            throw Error(path.string() + ": duplicate term \"" + lines[i] + "\" on lines " +
                        std::to_string(it->second + 1) + " and " + std::to_string(i + 1));
        }
    }
    return TermTable::from_terms(std::move(lines));
}

void save_term_table(const TermTable& table, const std::filesystem::path& path) {
    std::string out;
    for (const auto& t : table.terms()) {
        out += t;
        out += '\n';
    }
    write_file(path, out);
}

bool is_valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size()) {
            return false;
        }
        for (std::size_t k = 1; k < len; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                return false;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        // Overlong encodings, surrogates and out-of-range code points.
        if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
            (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) ||
            (cp >= 0xD800 && cp <= 0xDFFF)) {
            return false;
        }
        i += len;
    }
    return true;
}

} // namespace lexclust
