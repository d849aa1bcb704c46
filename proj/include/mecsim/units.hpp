#pragma once

#include <cmath>

namespace mecsim
{

inline double
dbm_to_watts (double dbm)
{
  return std::pow (10.0, (dbm - 30.0) / 10.0);
}

} // namespace mecsim
