#pragma once

#include "qdlab_cli/report.hpp"

namespace qdlab::cli::detail {

Report run_disc(const Json& config);
Report run_qdisc(const Json& config);
Report run_ubound(const Json& config);
Report run_lbound(const Json& config);
Report run_dpp(const Json& config);
Report run_compare(const Json& config);
Report run_haar(const Json& config);

}  // namespace qdlab::cli::detail
