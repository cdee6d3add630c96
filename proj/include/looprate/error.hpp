#pragma once

#include <stdexcept>
#include <string>

namespace looprate {

enum class errc {
    disconnected_graph,
    self_loop,
    non_positive_weight,
    unknown_endpoint,
    incomplete_rotation,
    bridge_present,
    empty_merge_set,
    non_square,
    singular,
    index_out_of_range,
    k_out_of_range,
    too_large,
    unreachable_target,
    vertex_stable,
    unstable,
    not_a_tree,
    not_recurrent,
    no_unicycle,
    unknown_lattice,
    non_positive_beta,
    quadrature_not_converged,
    missing_kernel,
    bad_input,
};

const char* errc_name(errc c);

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace looprate
