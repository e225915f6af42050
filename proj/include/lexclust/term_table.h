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

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexclust/types.h"

namespace lexclust {

/// Ordered set of unique, non-empty UTF-8 terms. A term's index is its TermId.
class TermTable {
public:
    TermTable() = default;

    /// Throws Error on empty, duplicate or non-UTF-8 entries.
    static TermTable from_terms(std::vector<std::string> terms);

    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    const std::string& term(TermId id) const;
    std::optional<TermId> find(std::string_view term) const;
    TermId id(std::string_view term) const;

    const std::vector<std::string>& terms() const { return terms_; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, TermId> index_;
};

/// One term per LF-terminated line; line order defines ids.
TermTable load_term_table(const std::filesystem::path& path);
void save_term_table(const TermTable& table, const std::filesystem::path& path);

bool is_valid_utf8(std::string_view s);

/// Splits file contents into lines. A trailing LF does not produce an empty
/// final line.
std::vector<std::string> split_lines(std::string_view contents);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

} // namespace lexclust
