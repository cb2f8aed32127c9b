// Copyright (c) 2026, lema-forge contributors
// SPDX-License-Identifier: Apache-2.0
//
// Internal JSON helpers shared by the codecs. Field order follows insertion
// so encoded lines are byte-stable.

#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "lema/types.hpp"

namespace lema::detail {

using Json = nlohmann::ordered_json;

Json answer_to_json(const AnswerValue& a);
AnswerValue answer_from_json(const Json& j, Task task);

/// Compact single-line dump; invalid UTF-8 is replaced rather than thrown.
std::string dump_line(const Json& j);

/// Parses one record line, checking the "v" schema version when present.
Json parse_object(std::string_view line);

}  // namespace lema::detail
