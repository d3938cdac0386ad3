// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

namespace thinkgate {

enum class TaskKind { kBoxed, kOptionLetter };

/// One benchmark question: open-ended items carry just the gold answer,
/// multiple-choice items also carry the (label, text) choices.
struct BenchmarkItem {
    std::string id;
    std::string question;
    std::vector<std::pair<std::string, std::string>> choices; // (label, text)
    std::string gold;
    TaskKind task_kind = TaskKind::kBoxed;

    void validate() const;

    /// "Question: ..." plus one "L. text" line per choice; no trailing
    /// newline.
    std::string render() const;

    std::vector<std::string> choice_labels() const;
};

} // namespace thinkgate
