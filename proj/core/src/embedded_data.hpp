#pragma once

#include <string_view>

// Canonical data files under core/data, compiled in at build time.
namespace polsel::detail {

std::string_view embedded_table_c3v();
std::string_view embedded_table_c1h();
std::string_view embedded_table_c3v_double();
std::string_view embedded_catalog();

}  // namespace polsel::detail
