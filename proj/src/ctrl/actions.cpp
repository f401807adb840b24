#include "soasim/ctrl/actions.hpp"

namespace soasim::ctrl {

namespace {

std::string describe_one(const PacketOut& a) {
    std::string ports;
    for (auto p : a.ports) ports += (ports.empty() ? "" : ",") + std::to_string(p);
    return "packet-out S" + std::to_string(a.switch_id) + " ports=" + ports + " " +
           a.frame->src.to_string() + "->" + a.frame->dst.to_string();
}

std::string describe_one(const FlowMod& a) {
    return "flow-mod S" + std::to_string(a.switch_id) + " " + net::to_string(a.op) + " " +
           a.rule.to_string();
}

std::string describe_one(const SendSd& a) {
    return "send-sd " + a.to.to_string() + " " + a.message.to_string();
}

}  // namespace

std::string describe(const ControlAction& action) {
    return std::visit([](const auto& a) { return describe_one(a); }, action);
}

}  // namespace soasim::ctrl
