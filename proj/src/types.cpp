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

#include "lexclust/types.h"

#include <string>

#include "lexclust/error.h"

namespace lexclust {

int relation_code(RelationLabel label) {
    return static_cast<int>(label);
}

RelationLabel relation_from_code(int code) {
    switch (code) {
    case 0:
        return RelationLabel::Antonym;
    case 1:
        return RelationLabel::CoHyponym;
    case 2:
        return RelationLabel::Synonym;
    default:
        throw Error("invalid relation code " + std::to_string(code));
    }
}

std::string_view relation_name(RelationLabel label) {
    switch (label) {
    case RelationLabel::Antonym:
        return "antonym";
    case RelationLabel::CoHyponym:
        return "cohyponym";
    case RelationLabel::Synonym:
        return "synonym";
    }
    throw Error("invalid relation label");
}

RelationLabel parse_relation_name(std::string_view name) {
    if (name == "antonym") {
        return RelationLabel::Antonym;
    }
    if (name == "cohyponym") {
        return RelationLabel::CoHyponym;
    }
    if (name == "synonym") {
        return RelationLabel::Synonym;
    }
    throw Error("unknown relation label \"" + std::string(name) + "\"");
}

} // namespace lexclust
