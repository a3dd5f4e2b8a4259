#include "curricula/contrastive.hpp"

#include <cmath>

#include "curricula/errors.hpp"

namespace curricula {

namespace {

void require(bool ok, const char* message) {
    if (!ok) throw ContractViolation(message);
}

double rowwise_loss(const Eigen::MatrixXd& s) {
    const Eigen::Index n = s.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double row_max = s.row(i).maxCoeff();
        const double lse = row_max + std::log((s.row(i).array() - row_max).exp().sum());
        total += lse - s(i, i);
    }
    return total / static_cast<double>(n);
}

}  // namespace

SimilarityMatrix similarity_matrix(const Eigen::MatrixXd& topics, const Eigen::MatrixXd& contents,
                                   double temperature) {
    require(topics.rows() == contents.rows(), "similarity_matrix: row counts differ");
    require(topics.cols() == contents.cols(), "similarity_matrix: embedding dims differ");
    require(topics.rows() >= 1, "similarity_matrix: empty input");
    require(temperature > 0.0, "similarity_matrix: temperature must be positive");
    SimilarityMatrix sim;
    sim.temperature = temperature;
    sim.values.noalias() = topics * contents.transpose();
    sim.values /= temperature;
    require(sim.values.allFinite(), "similarity_matrix: non-finite values");
    return sim;
}

double infonce_rowwise(const SimilarityMatrix& sim) {
    const auto& s = sim.values;
    require(s.rows() >= 1, "infonce_rowwise: empty matrix");
    require(s.cols() >= s.rows(), "infonce_rowwise: fewer columns than rows");
    require(s.allFinite(), "infonce_rowwise: non-finite similarities");
    return rowwise_loss(s);
}

double infonce_symmetric(const SimilarityMatrix& sim) {
    const auto& s = sim.values;
    require(s.rows() == s.cols(), "infonce_symmetric: matrix must be square");
    require(s.allFinite(), "infonce_symmetric: non-finite similarities");
    SimilarityMatrix transposed;
    transposed.temperature = sim.temperature;
    transposed.values = s.transpose();
    return 0.5 * (infonce_rowwise(sim) + infonce_rowwise(transposed));
}

// Closed form. With S = T C^t / tau (N rows, M >= N columns), and writing
// R for the row softmax of S and Q for the column softmax of its left N x N
// block, the symmetric loss
//     L = (1/2N) sum_i [lse(S_i:) - S_ii] + (1/2N) sum_j [lse(S_:j) - S_jj]
// differentiates to
//     dL/dS = (1/2N) * [(R - D) + (Q|0 - D)],  D(i,j) = [i == j],
// and the chain rule through S gives
//     grad_topics   = (dL/dS) C / tau,
//     grad_contents = (dL/dS)^t T / tau.
// Columns beyond N (extra negatives) receive only the row-softmax term.
LossReport infonce_gradients(const Eigen::MatrixXd& topics, const Eigen::MatrixXd& contents,
                             double temperature) {
    const Eigen::Index n = topics.rows();
    const Eigen::Index m = contents.rows();
    require(n >= 1, "infonce_gradients: empty batch");
    require(m >= n, "infonce_gradients: fewer contents than topics");
    require(topics.cols() == contents.cols(), "infonce_gradients: embedding dims differ");
    require(temperature > 0.0, "infonce_gradients: temperature must be positive");
    require(topics.allFinite() && contents.allFinite(), "infonce_gradients: non-finite input");

    Eigen::MatrixXd s = topics * contents.transpose() / temperature;

    double loss_row = 0.0;
    Eigen::MatrixXd row_softmax(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double row_max = s.row(i).maxCoeff();
        Eigen::ArrayXd e = (s.row(i).array() - row_max).exp();
        const double denom = e.sum();
        loss_row += row_max + std::log(denom) - s(i, i);
        row_softmax.row(i) = (e / denom).matrix().transpose();
    }

    double loss_col = 0.0;
    Eigen::MatrixXd col_softmax(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double col_max = s.col(j).maxCoeff();
        Eigen::ArrayXd e = (s.col(j).array() - col_max).exp();
        const double denom = e.sum();
        loss_col += col_max + std::log(denom) - s(j, j);
        col_softmax.col(j) = (e / denom).matrix();
    }

    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    Eigen::MatrixXd grad_s = row_softmax;
    grad_s.leftCols(n) += col_softmax;
    for (Eigen::Index i = 0; i < n; ++i) grad_s(i, i) -= 2.0;
    grad_s *= scale;

    LossReport report;
    report.loss = (loss_row + loss_col) * scale;
    report.grad_topics.noalias() = grad_s * contents / temperature;
    report.grad_contents.noalias() = grad_s.transpose() * topics / temperature;
    return report;
}

}  // namespace curricula
