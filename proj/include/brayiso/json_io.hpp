#pragma once

// JSON encoding of inputs (regions, perturbations, graph surfaces) and of
// every report. Reports share the envelope
// {"schema": "bray-iso/1", "command": ..., "settings": {...}, "result": ...}.

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "brayiso/chart.hpp"
#include "brayiso/decay.hpp"
#include "brayiso/deficit.hpp"
#include "brayiso/minimizer.hpp"
#include "brayiso/regions.hpp"

namespace brayiso {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "bray-iso/1";

/// Malformed input file; the message carries file:line:column.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

Region region_from_json(const Json& j);
Json region_to_json(const Region& r);
PerturbationSpec perturbation_from_json(const Json& j);
Json perturbation_to_json(const PerturbationSpec& p);
GraphSurface surface_from_json(const Json& j);
Json surface_to_json(const GraphSurface& s);

Json report_envelope(const std::string& command, Json settings, Json result);

/// Finite doubles as numbers, non-finite ones as the strings "inf", "-inf", "nan".
Json number(double x);

Json to_json(const ProfilePoint& p, MassParam m);
Json to_json(const ChartParams& c);
Json to_json(const GapReport& g);
Json to_json(const Measured& m);
Json to_json(const OffCenterReport& r);
Json to_json(const DeficitReport& r);
Json to_json(const ChainReport& r);
Json to_json(const PerturbedDeficitReport& r);
Json to_json(const TheoremStepReport& r);
Json to_json(const MinimizeReport& r, bool with_surface);
Json to_json(const BoundCheck& b);
Json to_json(const RadialIntegral& r);
Json to_json(const VolumeDiffCheck& v);

}  // namespace brayiso
