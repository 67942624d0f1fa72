#pragma once

#include <string>

namespace polymer {

// Locale-independent rendering with 17 significant digits ("nan"/"inf" for
// non-finite values).
std::string format_double(double value);

}  // namespace polymer
