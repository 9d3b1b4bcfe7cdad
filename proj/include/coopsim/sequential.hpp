// Copyright 2026 The coopsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COOPSIM_SEQUENTIAL_HPP_
#define COOPSIM_SEQUENTIAL_HPP_

// Agent-environment-cycle facade over the simultaneous-move Environment.
// Agents act one at a time in index order; later agents see the actions
// already chosen this cycle. The joint step runs when the last agent acts.
// After the episode ends every agent gets one final turn on which it must
// pass std::nullopt.

#include <optional>
#include <vector>

#include "coopsim/environment.hpp"
#include "coopsim/errors.hpp"

namespace coopsim {

struct AgentView {
  std::vector<double> observation;
  double reward = 0.0;
  bool terminated = false;
  bool truncated = false;
};

class SequentialView {
 public:
  explicit SequentialView(Environment& env) : env_(env) { reset_cycle(); }

  void reset(std::optional<std::uint64_t> seed = std::nullopt) {
    env_.reset(seed);
    reset_cycle();
  }

  // Index of the agent whose turn it is, or nullopt once the cycle of final
  // none-actions has completed.
  std::optional<int> agent_selection() const {
    if (finished_) return std::nullopt;
    return current_;
  }

  // What the current agent observes before acting.
  AgentView last() const {
    AgentView v;
    v.observation = env_.observation(current_, pending_);
    v.reward = last_rewards_.empty() ? 0.0 : last_rewards_[current_];
    v.terminated = env_.state().terminated;
    v.truncated = env_.state().truncated;
    return v;
  }

  // Submits the current agent's action. Returns the joint step result when
  // this action completed a cycle.
  std::optional<StepResult> act(int agent, std::optional<double> action) {
    if (finished_) throw ProtocolError("sequential episode has finished");
    if (agent != current_)
      throw ProtocolError("agent " + std::to_string(agent) +
                          " acted out of turn; expected " +
                          std::to_string(current_));
    const int n = env_.num_agents();
    if (env_.done()) {
      if (action) throw ProtocolError("terminated agent must pass none");
      if (++current_ == n) finished_ = true;
      return std::nullopt;
    }
    if (!action) throw ProtocolError("live agent must submit an action");
    pending_[agent] = *action;
    if (++current_ < n) return std::nullopt;

    std::vector<double> joint(n);
    for (int i = 0; i < n; ++i) joint[i] = *pending_[i];
    StepResult r = env_.step(joint);
    last_rewards_ = r.rewards;
    pending_.assign(n, std::nullopt);
    current_ = 0;
    return r;
  }

  const Environment& env() const { return env_; }

 private:
  void reset_cycle() {
    pending_.assign(env_.num_agents(), std::nullopt);
    last_rewards_.clear();
    current_ = 0;
    finished_ = false;
  }

  Environment& env_;
  std::vector<std::optional<double>> pending_;
  std::vector<double> last_rewards_;
  int current_ = 0;
  bool finished_ = false;
};

}  // namespace coopsim

#endif  // COOPSIM_SEQUENTIAL_HPP_
