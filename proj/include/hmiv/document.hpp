#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmiv/checker.hpp"
#include "hmiv/diagnostic.hpp"
#include "hmiv/expr.hpp"
#include "hmiv/petri.hpp"
#include "hmiv/statechart.hpp"
#include "hmiv/taskmodel.hpp"

namespace hmiv {

struct InputBinding {
  std::string task;
  std::string event;
  Span span;

  bool operator==(const InputBinding& o) const { return task == o.task && event == o.event; }
};

// Output task checked against a predicate over the system state.
struct OutputBinding {
  std::string task;
  Expr observation;
  Span span;

  bool operator==(const OutputBinding& o) const { return task == o.task && observation == o.observation; }
};

struct Correspondence {
  std::string name;
  std::string task_model;
  std::string system;  // statechart or petri net
  std::vector<InputBinding> inputs;
  std::vector<OutputBinding> outputs;
  // System events regarded as user inputs for the system-allowed /
  // task-forbidden sweep. Defaults to the events of the input bindings.
  std::optional<std::vector<std::string>> system_inputs;
  Span span;

  bool operator==(const Correspondence& o) const {
    return name == o.name && task_model == o.task_model && system == o.system && inputs == o.inputs &&
           outputs == o.outputs && system_inputs == o.system_inputs;
  }
};

struct Document {
  std::vector<StatechartModel> statecharts;
  std::vector<petri::PetriNet> nets;
  std::vector<task::TaskModel> taskmodels;
  std::vector<Correspondence> correspondences;
  std::vector<check::PropertySpec> properties;

  bool operator==(const Document&) const = default;

  bool empty() const {
    return statecharts.empty() && nets.empty() && taskmodels.empty() && correspondences.empty() && properties.empty();
  }

  const StatechartModel* statechart(std::string_view name) const;
  const petri::PetriNet* net(std::string_view name) const;
  const task::TaskModel* taskmodel(std::string_view name) const;
  const Correspondence* correspondence(std::string_view name) const;
  const check::PropertySpec* property(std::string_view name) const;
};

}  // namespace hmiv
