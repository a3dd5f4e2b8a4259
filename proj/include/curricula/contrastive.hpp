#pragma once

#include <Eigen/Core>

namespace curricula {

// Scaled dot-product similarities between topic and content embeddings.
// For unit rows, values(i, j) = cos(topic_i, content_j) / temperature.
struct SimilarityMatrix {
    Eigen::MatrixXd values;
    double temperature = 0.05;
};

// Loss value plus its exact gradients with respect to both embedding
// matrices (not the raw parameters; the encoder backpropagates further).
struct LossReport {
    double loss = 0.0;
    Eigen::MatrixXd grad_topics;
    Eigen::MatrixXd grad_contents;
};

// Throws ContractViolation on shape mismatch or temperature <= 0.
SimilarityMatrix similarity_matrix(const Eigen::MatrixXd& topics, const Eigen::MatrixXd& contents,
                                   double temperature);

// Mean over rows of -log softmax(S_i)[i]: the matched pair is the positive
// class, the other columns of the row are the in-batch negatives. Uses
// log-sum-exp with the row max subtracted, so tau = 0.05 cannot overflow.
double infonce_rowwise(const SimilarityMatrix& sim);

// Unweighted mean of the row-wise loss over S and over its transpose.
double infonce_symmetric(const SimilarityMatrix& sim);

// Loss and closed-form gradients of the symmetric loss. contents may have
// extra rows beyond topics; the extras act as additional negative columns
// with no positive of their own.
LossReport infonce_gradients(const Eigen::MatrixXd& topics, const Eigen::MatrixXd& contents,
                             double temperature);

}  // namespace curricula
