// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#include "thinkgate/segmenter.hpp"

#include <stdexcept>

#include "thinkgate/text.hpp"

namespace thinkgate {

Segmenter::Segmenter(std::string delimiter, std::size_t min_chars)
    : delimiter_(std::move(delimiter)), min_chars_(min_chars) {
    if (delimiter_.empty()) {
        throw std::invalid_argument("Segmenter: delimiter must be non-empty");
    }
}

std::vector<std::string> Segmenter::feed(std::string_view chunk) {
    pending_.append(chunk);
    std::vector<std::string> completed;
    while (true) {
        const std::size_t pos = pending_.find(delimiter_, scan_pos_);
        if (pos == std::string::npos) {
            // Anything before a possible partial delimiter at the tail has
            // been judged; keep the tail unjudged so a delimiter split
            // across chunks still triggers on the next feed. The scan
            // position only ever moves forward, so a suppressed occurrence
            // is never re-judged through an overlapping window.
            const std::size_t tail = delimiter_.size() - 1;
            const std::size_t guard = pending_.size() > tail ? pending_.size() - tail : 0;
            if (guard > scan_pos_) {
                scan_pos_ = guard;
            }
            break;
        }
        if (utf8_length(std::string_view(pending_).substr(0, pos)) >= min_chars_) {
            completed.emplace_back(pending_.substr(0, pos));
            pending_.erase(0, pos + delimiter_.size());
            scan_pos_ = 0;
            ++emitted_;
        } else {
            // Below the minimum: the delimiter stays inside the step.
            scan_pos_ = pos + delimiter_.size();
        }
    }
    return completed;
}

std::optional<std::string> Segmenter::flush() {
    std::optional<std::string> result;
    if (!pending_.empty()) {
        result = std::move(pending_);
    }
    pending_.clear();
    scan_pos_ = 0;
    emitted_ = 0;
    return result;
}

} // namespace thinkgate
