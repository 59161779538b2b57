#pragma once

#include <string>

#include "mtsa/pe/ground.hpp"

namespace mtsa::pe {

class EmitError : public Error {
public:
    enum class Kind { BadBigM };

    EmitError(Kind kind, const std::string& message)
        : Error("emit error: " + message), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct OplExport {
    std::string model;  // .mod contents
    std::string data;   // .dat contents
};

// Renders the grounded instance as an OPL model with a piecewise-linear
// meter function, plus a data section carrying the calendar and demand.
OplExport emit_opl(const GroundInstance& g);

// Exact big-M linearization of the piecewise meter, in LP text format with
// one binary per future interval. Requires M >= the maximum demand.
std::string emit_milp(const GroundInstance& g, double bigM);

// Tightest generally valid constant: the maximum demand over the horizon.
double default_big_m(const GroundInstance& g);

}  // namespace mtsa::pe
