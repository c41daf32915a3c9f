#pragma once

#include <stdexcept>
#include <string>

namespace stokesim {

// Invalid or inconsistent user input (config files, CLI values, malformed CSV).
// Messages carry a field path like "scenario.dt" where one exists.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation left its domain of validity: non-finite state, coincident
// markers fed to a singular kernel, a degenerate spring. Messages carry the
// time or interval where the failure happened when known.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

class SingularEvaluation : public NumericalError {
public:
    explicit SingularEvaluation(const std::string& msg) : NumericalError(msg) {}
};

class DegenerateGeometry : public NumericalError {
public:
    explicit DegenerateGeometry(const std::string& msg) : NumericalError(msg) {}
};

} // namespace stokesim
