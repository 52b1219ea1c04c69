#include "negtemp/models.hpp"

#include <cmath>

#include "negtemp/diagnostics.hpp"

namespace negtemp {
namespace {

void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        throw InvalidArgument(std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
    }
}

void require_qubit_slot(const SpaceDescriptor& space, std::size_t slot, const char* who) {
    if (slot >= space.slots() || space[slot] != 2) {
        throw InvalidSlot(std::string(who) + ": slot " + std::to_string(slot) +
                          " is not a qubit slot of " + space.to_string());
    }
}

} // namespace

void ModelSpec::validate() const {
    require_nonnegative(coupling_g, "coupling_g");
    require_nonnegative(gamma, "gamma");
    require_nonnegative(kappa, "kappa");
    require_nonnegative(n_f, "n_f");
    require_nonnegative(n_a, "n_a");
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    if (lambda.has_value() != gamma_B.has_value()) {
        throw InvalidArgument("lambda and gamma_B must be given together");
    }
    if (lambda) {
        if (topology != Topology::coupled) {
            throw InvalidArgument("a second atom requires the coupled topology");
        }
        require_nonnegative(*lambda, "lambda");
        require_nonnegative(*gamma_B, "gamma_B");
    }
}

double coupling_from_cooperativity(double cooperativity, double gamma, double kappa) {
    if (!(cooperativity >= 0.0)) {
        throw DomainError("cooperativity must be >= 0, got " + std::to_string(cooperativity));
    }
    if (!(gamma > 0.0) || !(kappa > 0.0)) {
        throw DomainError("gamma and kappa must be > 0 to convert a cooperativity");
    }
    return std::sqrt(cooperativity * gamma * kappa);
}

Operator build_ajcm_hamiltonian(unsigned k, double g, const SpaceDescriptor& space,
                                std::size_t boson_slot, std::size_t atom_slot) {
    require_qubit_slot(space, atom_slot, "build_ajcm_hamiltonian");
    if (boson_slot >= space.slots() || boson_slot == atom_slot) {
        throw InvalidSlot("build_ajcm_hamiltonian: invalid boson slot " + std::to_string(boson_slot));
    }
    const Index n_max = space[boson_slot];
    const Operator ak = annihilation_power(n_max, k);
    if (g > 0.0 && ak.nonzeros() == 0) {
        warn("sideband order k=" + std::to_string(k) + " exceeds the Fock cutoff n_max=" +
             std::to_string(n_max) + "; the qubit is decoupled from the boson");
    }
    const Operator lower = embed(qubit_operator(QubitOp::sigma_minus), space, atom_slot);
    const Operator raise = embed(qubit_operator(QubitOp::sigma_plus), space, atom_slot);
    const Operator ak_full = embed(ak, space, boson_slot);
    const Operator akdag_full = embed(adjoint(ak), space, boson_slot);
    return Complex(g) * (lower * ak_full + raise * akdag_full);
}

Operator build_exchange_hamiltonian(double lambda, const SpaceDescriptor& space, std::size_t slot_a,
                                    std::size_t slot_b) {
    require_qubit_slot(space, slot_a, "build_exchange_hamiltonian");
    require_qubit_slot(space, slot_b, "build_exchange_hamiltonian");
    if (slot_a == slot_b) {
        throw InvalidSlot("build_exchange_hamiltonian: slots must be distinct, both are " +
                          std::to_string(slot_a));
    }
    const Operator plus_a = embed(qubit_operator(QubitOp::sigma_plus), space, slot_a);
    const Operator minus_a = embed(qubit_operator(QubitOp::sigma_minus), space, slot_a);
    const Operator plus_b = embed(qubit_operator(QubitOp::sigma_plus), space, slot_b);
    const Operator minus_b = embed(qubit_operator(QubitOp::sigma_minus), space, slot_b);
    return Complex(lambda) * (plus_a * minus_b + minus_a * plus_b);
}

SpaceDescriptor model_space(const ModelSpec& spec) {
    switch (spec.topology) {
    case Topology::boson_only: return SpaceDescriptor{spec.n_max};
    case Topology::qubit_only: return SpaceDescriptor{2};
    case Topology::coupled: break;
    }
    if (spec.two_atom()) return SpaceDescriptor{spec.n_max, 2, 2};
    return SpaceDescriptor{spec.n_max, 2};
}

std::vector<LindbladTerm> build_dissipators(const ModelSpec& spec, const SpaceDescriptor& space) {
    std::vector<LindbladTerm> terms;
    auto add = [&](double rate, Operator jump, std::string label) {
        if (rate != 0.0) terms.push_back({rate, std::move(jump), std::move(label)});
    };
    auto add_boson = [&](std::size_t slot) {
        const Operator a = embed(annihilation(space[slot]), space, slot);
        add(spec.kappa * (spec.n_f + 1.0), a, "boson_down");
        add(spec.kappa * spec.n_f, adjoint(a), "boson_up");
    };
    auto add_atom = [&](std::size_t slot, double rate, const std::string& name) {
        add(rate * (spec.n_a + 1.0), embed(qubit_operator(QubitOp::sigma_minus), space, slot),
            name + "_down");
        add(rate * spec.n_a, embed(qubit_operator(QubitOp::sigma_plus), space, slot), name + "_up");
    };

    switch (spec.topology) {
    case Topology::boson_only: add_boson(0); break;
    case Topology::qubit_only: add_atom(0, spec.gamma, "atom_A"); break;
    case Topology::coupled:
        add_boson(0);
        add_atom(1, spec.gamma, "atom_A");
        if (spec.two_atom()) add_atom(2, *spec.gamma_B, "atom_B");
        break;
    }
    return terms;
}

ModelInstance build_model(const ModelSpec& spec) {
    spec.validate();
    SpaceDescriptor space = model_space(spec);
    ModelInstance model{space, Operator::zero(space), build_dissipators(spec, space), spec.convention,
                        std::nullopt, {}};

    switch (spec.topology) {
    case Topology::boson_only: model.boson_slot = 0; break;
    case Topology::qubit_only: model.qubit_slots = {0}; break;
    case Topology::coupled:
        model.boson_slot = 0;
        model.qubit_slots = {1};
        model.hamiltonian = build_ajcm_hamiltonian(spec.k, spec.coupling_g, space, 0, 1);
        if (spec.two_atom()) {
            model.qubit_slots.push_back(2);
            model.hamiltonian =
                model.hamiltonian + build_exchange_hamiltonian(*spec.lambda, space, 1, 2);
        }
        break;
    }
    return model;
}

} // namespace negtemp
