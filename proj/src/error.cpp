#include "polymer/error.hpp"

namespace polymer {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid dimension";
    case ErrorKind::invalid_intensity: return "invalid intensity";
    case ErrorKind::invalid_time: return "invalid time";
    case ErrorKind::invalid_point: return "invalid point";
    case ErrorKind::invalid_index: return "invalid index";
    case ErrorKind::invalid_count: return "invalid count";
    case ErrorKind::invalid_delta: return "invalid delta";
    case ErrorKind::incompatible_box: return "incompatible box";
    case ErrorKind::window_coverage: return "window coverage";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::hypothesis: return "hypothesis violated";
    case ErrorKind::invalid_query: return "invalid query";
    case ErrorKind::numeric: return "numeric failure";
    case ErrorKind::config: return "invalid config";
  }
  return "error";
}

}  // namespace polymer
