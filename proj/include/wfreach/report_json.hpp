#pragma once

#include <json.hpp>

#include "wfreach/decide.hpp"

namespace wfreach {

using Json = nlohmann::ordered_json;

Json net_json(const WorkflowNet& wf);
Json structure_json(const PetriNet& net, const StructureReport& report);
Json soundness_json(const PetriNet& net, const SoundnessResult& s);
Json witness_json(const PetriNet& net, const Witness& w);
Json report_json(const PetriNet& net, const AnalysisReport& report);
Json roles_json(const PetriNet& net, const RoleMap& roles);
Json concurrency_json(const PetriNet& net, const ConcurrencyRelation& conc);
Json postdom_json(const PetriNet& net, const PostDomData& pd);
Json error_json(const Error& e);

}  // namespace wfreach
