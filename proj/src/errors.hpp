#pragma once

#include <stdexcept>
#include <string>

namespace mhtc {

enum class errc {
    config,        // bad configuration / parse failure
    domain,        // argument outside the mathematical domain
    unachievable,  // requested target not reachable on the valid branch
    out_of_regime, // model produced a value outside its regime of validity
    numeric,       // iteration / quadrature failed to converge
    io,            // file I/O failure
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

} // namespace mhtc
