#pragma once

#include <stdexcept>

namespace mecsim
{

// Bad or inconsistent user configuration.
class ConfigError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// A computation produced a value the model cannot represent (e.g. an
// unbounded SINR).
class NumericalError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace mecsim
