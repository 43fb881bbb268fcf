#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "odsearch/dataset.hpp"

namespace odsearch {

/// Accepts integer epoch milliseconds or `YYYY-MM-DD[ T]HH:MM:SS[.ffffff]`
/// (interpreted as UTC). Surrounding quotes and whitespace are ignored.
std::optional<EpochMs> parse_timestamp(std::string_view text);

/// `YYYY-MM-DD HH:MM:SS` in UTC; milliseconds are appended only when nonzero.
std::string format_timestamp(EpochMs t);

}  // namespace odsearch
