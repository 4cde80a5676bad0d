#include "marmab/instance_io.hpp"

#include <fstream>
#include <sstream>

namespace marmab {

using nlohmann::json;

json arm_to_json(const ArmModel& arm) {
  return json{{"n_states", arm.n_states},
              {"n_actions", arm.n_actions},
              {"costs", arm.costs},
              {"rewards", arm.rewards},
              {"transitions", arm.transitions}};
}

ArmModel arm_from_json(const json& j) {
  ArmModel arm;
  arm.costs = j.at("costs").get<std::vector<double>>();
  arm.rewards = j.at("rewards").get<std::vector<double>>();
  arm.transitions = j.at("transitions").get<std::vector<double>>();
  arm.n_actions = j.contains("n_actions") ? j.at("n_actions").get<int>() : static_cast<int>(arm.costs.size());
  arm.n_states = j.contains("n_states") ? j.at("n_states").get<int>() : static_cast<int>(arm.rewards.size());
  return arm;
}

json instance_to_json(const RmabInstance& instance) {
  json arms = json::array();
  for (const auto& arm : instance.arms()) arms.push_back(arm_to_json(arm));
  return json{{"discount", instance.discount()}, {"budget", instance.budget()}, {"arms", std::move(arms)}};
}

RmabInstance instance_from_json(const json& j) {
  std::vector<ArmModel> arms;
  for (const auto& a : j.at("arms")) arms.push_back(arm_from_json(a));
  return RmabInstance(std::move(arms), j.at("budget").get<double>(), j.at("discount").get<double>());
}

void save_instance(const RmabInstance& instance, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << instance_to_json(instance).dump(1) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

RmabInstance load_instance(const std::filesystem::path& path) { return instance_from_json(read_json_file(path)); }

}  // namespace marmab
