#include "dpd/messages.hpp"

#include <algorithm>

namespace dpd {

MessageBus::MessageBus(const Graph& graph, bool keep_log)
    : graph_(&graph),
      keep_log_(keep_log),
      pending_(static_cast<std::size_t>(graph.n())),
      inbox_(static_cast<std::size_t>(graph.n())) {}

void MessageBus::post(RoundMessage msg) {
  if (msg.from < 0 || msg.from >= graph_->n() || msg.to < 0 || msg.to >= graph_->n() ||
      !graph_->adjacent(msg.from, msg.to))
    throw InvalidInput("message bus: " + std::to_string(msg.from) + " -> " + std::to_string(msg.to) +
                       " is not a graph edge");
  pending_[static_cast<std::size_t>(msg.to)].push_back(std::move(msg));
}

void MessageBus::barrier() {
  for (std::size_t i = 0; i < pending_.size(); ++i) {
    inbox_[i] = std::move(pending_[i]);
    pending_[i].clear();
    std::stable_sort(inbox_[i].begin(), inbox_[i].end(),
                     [](const RoundMessage& a, const RoundMessage& b) { return a.from < b.from; });
  }
}

const std::vector<RoundMessage>& MessageBus::consume(int agent, int round) {
  const auto& in = inbox_[static_cast<std::size_t>(agent)];
  if (keep_log_)
    for (const RoundMessage& m : in) log_.push_back({round, m.from, m.to, m.round});
  return in;
}

}  // namespace dpd
