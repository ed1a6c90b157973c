#pragma once

#include <limits>
#include <string>

#include "hyshift/log_model.hpp"

namespace hyshift {

enum class Status { Exact, LowerBounded, UpperBounded, HorizonOnly };

const char* to_string(Status s);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// A log-domain quantity together with how far it is certified.
//
// `log_value` is the certified value of the quantity over its full (infinite)
// index range; it may be +-inf. When status is HorizonOnly it is the
// extremum found on the scanned range. `horizon_log` and `arg` always hold the
// extremum over the scanned range and the index realising it.
struct CertifiedValue {
    double log_value = 0.0;
    Status status = Status::HorizonOnly;
    double horizon_log = 0.0;
    Index arg = 0;
    Index horizon = 0;
    std::string note;

    bool certified() const { return status != Status::HorizonOnly; }
};

}  // namespace hyshift
