#pragma once

// Driven qubit-boson models in the interaction picture, gamma = hbar = k_B = 1.
//
//   H = g (sigma_- a^k + sigma_+ a^dag^k)  [+ lambda (sigma_+^A sigma_-^B + h.c.)]
//
// with thermal Lindblad channels on the boson (rate kappa, occupation n_f) and on
// every qubit (rate gamma / gamma_B, occupation n_a).

#include <optional>
#include <string>
#include <vector>

#include "negtemp/hilbert.hpp"

namespace negtemp {

/// Normalisation of the Lindblad dissipator D[A] multiplying each channel rate.
enum class DissipatorConvention {
    /// A rho A^dag - (A^dag A rho + rho A^dag A) / 2
    standard,
    /// 2 A rho A^dag - A^dag A rho - rho A^dag A
    doubled,
};

/// Which subsystems a model contains. `coupled` means boson + atom A (+ atom B if lambda is set).
enum class Topology { coupled, boson_only, qubit_only };

struct ModelSpec {
    unsigned k = 1;
    double coupling_g = 0.0;
    double gamma = 1.0;
    double kappa = 1.0;
    double n_f = 0.0;
    double n_a = 0.0;
    std::optional<double> lambda;
    std::optional<double> gamma_B;
    Index n_max = 8;
    Topology topology = Topology::coupled;
    DissipatorConvention convention = DissipatorConvention::standard;

    bool two_atom() const noexcept { return topology == Topology::coupled && lambda.has_value(); }

    /// Throws InvalidArgument when an invariant is violated.
    void validate() const;
};

/// One channel rate * D[jump] of the master equation.
struct LindbladTerm {
    double rate;
    Operator jump;
    std::string label;
};

struct ModelInstance {
    SpaceDescriptor space;
    Operator hamiltonian;
    std::vector<LindbladTerm> dissipators;
    DissipatorConvention convention = DissipatorConvention::standard;
    std::optional<std::size_t> boson_slot;
    std::vector<std::size_t> qubit_slots;
};

/// g = sqrt(C gamma kappa).
double coupling_from_cooperativity(double cooperativity, double gamma, double kappa);

/// g (sigma_- (x) a^k + sigma_+ (x) a^dag^k) on `space`; warns when a^k vanishes under the cutoff.
Operator build_ajcm_hamiltonian(unsigned k, double g, const SpaceDescriptor& space,
                                std::size_t boson_slot, std::size_t atom_slot);

Operator build_exchange_hamiltonian(double lambda, const SpaceDescriptor& space, std::size_t slot_a,
                                    std::size_t slot_b);

/// Thermal channels for every subsystem of `spec`; channels whose rate is exactly zero are dropped.
std::vector<LindbladTerm> build_dissipators(const ModelSpec& spec, const SpaceDescriptor& space);

SpaceDescriptor model_space(const ModelSpec& spec);

ModelInstance build_model(const ModelSpec& spec);

} // namespace negtemp
