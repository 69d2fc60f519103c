#include "dem/loss.hpp"

namespace dem::loss {

namespace {

template <int D>
LossValues at_reference(const prob::ProblemDef& prob,
                        const mesh::NodeSet& nodes,
                        const ref::ReferenceSolution& sol) {
  auto factory = [](Eigen::Index rows) { return col::PlainAlg{rows}; };
  auto fields = [&](col::PlainAlg& alg, const Eigen::MatrixXd& pts) {
    return const_fields<col::PlainAlg, D>(alg, sol.at(pts));
  };
  auto parts = assemble_loss<D>(factory, prob, nodes, fields);
  return values_of<col::PlainAlg>(parts);
}

}  // namespace

LossValues loss_at_reference(const prob::ProblemDef& prob,
                             const mesh::NodeSet& nodes,
                             const ref::ReferenceSolution& sol) {
  return prob.dim == 1 ? at_reference<1>(prob, nodes, sol)
                       : at_reference<2>(prob, nodes, sol);
}

}  // namespace dem::loss
