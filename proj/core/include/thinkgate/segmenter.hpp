// Copyright (c) 2026 thinkgate contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thinkgate {

/// Incremental splitter of streamed reasoning text into steps.
///
/// A delimiter occurrence closes the current step only when the accumulated
/// step text (excluding the delimiter) contains at least min_chars Unicode
/// scalar values; a shorter occurrence stays inside the step verbatim, so
/// joining each emitted step with the delimiter it was closed on plus the
/// final pending text reconstructs the input exactly. The emitted step
/// sequence is invariant to how the input is chunked: a delimiter split
/// across two chunks still triggers.
class Segmenter {
public:
    explicit Segmenter(std::string delimiter = "\n\n", std::size_t min_chars = 120);

    /// Consumes a chunk and returns the steps completed by it, in order.
    std::vector<std::string> feed(std::string_view chunk);

    /// Ends the stream: returns the pending text as a final step if
    /// non-empty (no minimum applied), and resets the segmenter.
    std::optional<std::string> flush();

    const std::string& pending() const { return pending_; }
    const std::string& delimiter() const { return delimiter_; }
    std::size_t min_chars() const { return min_chars_; }
    std::size_t emitted_count() const { return emitted_; }

private:
    std::string delimiter_;
    std::size_t min_chars_;
    std::string pending_;
    std::size_t scan_pos_ = 0; // occurrences before this offset were already judged
    std::size_t emitted_ = 0;
};

} // namespace thinkgate
