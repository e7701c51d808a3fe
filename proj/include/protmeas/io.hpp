// io.hpp — JSON/CSV serialization of the domain types
#pragma once

#include "protmeas/coupling.hpp"
#include "protmeas/dynamics.hpp"
#include "protmeas/perturbation.hpp"
#include "protmeas/spectral.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace protmeas {

// CouplingSpec <-> {"shape": "constant"|"series"|"bump", "T": ..., "N": ...,
// "alpha": ..., "beta": ...}. Series coefficients and bump normalization are
// re-derived on load, never stored.
nlohmann::ordered_json coupling_to_json(const CouplingSpec& spec);
CouplingSpec coupling_from_json(const nlohmann::json& j);

// Model file: {"energies": [..], "observable": [[[re, im], ..], ..], "initial": int}
nlohmann::ordered_json model_to_json(const SystemModel& model);
SystemModel model_from_json(const nlohmann::json& j);
SystemModel load_model_file(const std::string& path);

nlohmann::ordered_json fit_to_json(const DecayFit& fit);

nlohmann::ordered_json evolution_to_json(const EvolutionResult& result);

nlohmann::ordered_json amplitudes_to_json(const AmplitudeSet& set);

// CSV writers; 17 significant digits so values round-trip exactly.
std::string format_full(double v);
void write_curve_csv(std::ostream& os, const SpectralCurve& curve);
void write_envelope_csv(std::ostream& os, const Envelope& envelope);
void write_samples_csv(std::ostream& os, const std::vector<std::pair<double, double>>& samples);

}  // namespace protmeas
