#pragma once

#include <string_view>

namespace copmaint::cli {

/// Published table values (data/reference_tables.json), embedded at build time.
std::string_view reference_tables_json();

}  // namespace copmaint::cli
