#include "gnnsim/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace gnnsim {

namespace {

double act_eval(LutKind kind, double x) { return lut_reference(kind, x); }

double act_deriv(LutKind kind, double x) { return lut_reference(derivative_kind(kind), x); }

std::vector<double> matvec(const RealMatrix& w, const std::vector<double>& x) {
    std::vector<double> y(w.size(), 0.0);
    for (std::size_t r = 0; r < w.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) y[r] += w[r][c] * x[c];
    return y;
}

std::vector<double> softmax_real(const std::vector<double>& z) {
    const double zmax = *std::max_element(z.begin(), z.end());
    std::vector<double> e(z.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        e[i] = std::exp(z[i] - zmax);
        sum += e[i];
    }
    for (double& v : e) v /= sum;
    return e;
}

}  // namespace

OracleNet oracle_from_config(const NetworkConfig& cfg) {
    OracleNet net;
    net.dims = cfg.dims();
    net.activations = cfg.activations;
    net.weights = init_weights_real(cfg);
    return net;
}

OracleNet oracle_from_state(const NetworkConfig& cfg, const NetworkState& state) {
    OracleNet net;
    net.dims = cfg.dims();
    net.activations = cfg.activations;
    for (const WeightMatrix& w : state.weights) {
        RealMatrix m(std::size_t(w.rows), std::vector<double>(std::size_t(w.cols)));
        for (int r = 0; r < w.rows; ++r)
            for (int c = 0; c < w.cols; ++c) m[std::size_t(r)][std::size_t(c)] = to_real(w.at(r, c));
        net.weights.push_back(std::move(m));
    }
    return net;
}

OracleTrace oracle_forward(const OracleNet& net, const std::vector<double>& x) {
    if (x.size() != std::size_t(net.dims.front())) throw std::invalid_argument("input dimension mismatch");
    OracleTrace trace;
    std::vector<double> current = x;
    const std::size_t n_hidden = net.activations.size();
    for (std::size_t l = 0; l < n_hidden; ++l) {
        trace.pre.push_back(matvec(net.weights[l], current));
        std::vector<double> post(trace.pre.back().size());
        for (std::size_t i = 0; i < post.size(); ++i)
            post[i] = act_eval(net.activations[l], trace.pre.back()[i]);
        trace.post.push_back(post);
        current = std::move(post);
    }
    trace.z = matvec(net.weights[n_hidden], current);
    trace.yhat = softmax_real(trace.z);
    return trace;
}

double oracle_loss(const OracleNet& net, const std::vector<double>& x, int label) {
    const OracleTrace trace = oracle_forward(net, x);
    return -std::log(std::max(trace.yhat[std::size_t(label)], 1e-300));
}

std::vector<RealMatrix> oracle_backward(const OracleNet& net, const std::vector<double>& x, int label) {
    const OracleTrace trace = oracle_forward(net, x);
    const std::size_t n_layers = net.weights.size();
    std::vector<RealMatrix> grads(n_layers);

    // Softmax + cross-entropy: output delta is yhat - y.
    std::vector<double> delta = trace.yhat;
    delta[std::size_t(label)] -= 1.0;

    for (std::size_t l = n_layers; l-- > 0;) {
        const std::vector<double>& layer_in = l == 0 ? x : trace.post[l - 1];
        RealMatrix g(delta.size(), std::vector<double>(layer_in.size()));
        for (std::size_t r = 0; r < delta.size(); ++r)
            for (std::size_t c = 0; c < layer_in.size(); ++c) g[r][c] = delta[r] * layer_in[c];
        grads[l] = std::move(g);

        if (l == 0) break;
        std::vector<double> next(net.weights[l][0].size(), 0.0);
        for (std::size_t r = 0; r < net.weights[l].size(); ++r)
            for (std::size_t c = 0; c < next.size(); ++c) next[c] += net.weights[l][r][c] * delta[r];
        for (std::size_t c = 0; c < next.size(); ++c)
            next[c] *= act_deriv(net.activations[l - 1], trace.pre[l - 1][c]);
        delta = std::move(next);
    }
    return grads;
}

int oracle_argmax(const std::vector<double>& v) {
    return int(std::max_element(v.begin(), v.end()) - v.begin());
}

OracleEpochStats oracle_train_epoch(OracleNet& net, const Dataset& data, double gamma, int batch_size) {
    if (data.size() == 0) throw std::invalid_argument("empty dataset");
    OracleEpochStats stats;
    int correct = 0;
    int i = 0;
    while (i < data.size()) {
        const int m = std::min(batch_size, data.size() - i);
        std::vector<RealMatrix> sum;
        for (int b = 0; b < m; ++b, ++i) {
            const std::vector<double> x = signal_to_reals(data.sample(i));
            const int label = data.label(i);
            const OracleTrace trace = oracle_forward(net, x);
            stats.mean_loss += -std::log(std::max(trace.yhat[std::size_t(label)], 1e-300));
            if (oracle_argmax(trace.yhat) == label) ++correct;
            std::vector<RealMatrix> g = oracle_backward(net, x, label);
            if (sum.empty()) {
                sum = std::move(g);
            } else {
                for (std::size_t l = 0; l < sum.size(); ++l)
                    for (std::size_t r = 0; r < sum[l].size(); ++r)
                        for (std::size_t c = 0; c < sum[l][r].size(); ++c) sum[l][r][c] += g[l][r][c];
            }
        }
        for (std::size_t l = 0; l < sum.size(); ++l)
            for (std::size_t r = 0; r < sum[l].size(); ++r)
                for (std::size_t c = 0; c < sum[l][r].size(); ++c)
                    net.weights[l][r][c] -= gamma * sum[l][r][c];
    }
    stats.mean_loss /= double(data.size());
    stats.accuracy = double(correct) / double(data.size());
    return stats;
}

}  // namespace gnnsim
