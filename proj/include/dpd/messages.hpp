#pragma once

#include "dpd/config.hpp"
#include "dpd/graph.hpp"

#include <vector>

namespace dpd {

struct RoundMessage {
  int from = -1;
  int to = -1;
  int round = 0;
  Vector payload;
};

// One entry per consumed message: the round in which the receiver used it.
struct DeliveryRecord {
  int consumed_round = 0;
  int from = -1;
  int to = -1;
  int message_round = 0;
};

// In-process synchronous message layer.  Messages posted during a round become
// visible only after barrier(); inboxes are ordered by sender id.
class MessageBus {
 public:
  explicit MessageBus(const Graph& graph, bool keep_log = false);

  // Throws InvalidInput when sender and receiver are not graph neighbors.
  void post(RoundMessage msg);
  void barrier();
  // Marks the inbox of `agent` as consumed in `round` and returns it.
  const std::vector<RoundMessage>& consume(int agent, int round);

  const std::vector<DeliveryRecord>& log() const { return log_; }

 private:
  const Graph* graph_;
  bool keep_log_;
  std::vector<std::vector<RoundMessage>> pending_;
  std::vector<std::vector<RoundMessage>> inbox_;
  std::vector<DeliveryRecord> log_;
};

}  // namespace dpd
