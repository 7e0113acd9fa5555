#include "cuspforge/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <string>

#include "cuspforge/error.hpp"

namespace cuspforge {

namespace {

struct Workspace {
    explicit Workspace(std::size_t n) : size(n), ws(gsl_integration_workspace_alloc(n)) {}
    ~Workspace() { gsl_integration_workspace_free(ws); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    std::size_t size;
    gsl_integration_workspace* ws;
};

gsl_integration_workspace* workspace(std::size_t n) {
    thread_local std::unique_ptr<Workspace> cached;
    if (!cached || cached->size < n) cached = std::make_unique<Workspace>(n);
    return cached->ws;
}

double trampoline(double x, void* params) {
    return (*static_cast<const std::function<double(double)>*>(params))(x);
}

const bool handler_disabled = [] {
    gsl_set_error_handler_off();
    return true;
}();

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& opt) {
    (void)handler_disabled;
    if (a == b) return 0.0;
    gsl_function gf;
    gf.function = &trampoline;
    gf.params = const_cast<std::function<double(double)>*>(&f);
    const auto limit = static_cast<std::size_t>(opt.max_subdivisions);
    double result = 0.0, abserr = 0.0;
    const int status =
        opt.endpoint_singular
            ? gsl_integration_qags(&gf, a, b, opt.abs_tol, opt.rel_tol, limit, workspace(limit),
                                   &result, &abserr)
            : gsl_integration_qag(&gf, a, b, opt.abs_tol, opt.rel_tol, limit, GSL_INTEG_GAUSS21,
                                  workspace(limit), &result, &abserr);
    if (status != GSL_SUCCESS)
        throw QuadratureFailure(std::string("adaptive quadrature failed: ") +
                                gsl_strerror(status) + ", error estimate " +
                                std::to_string(abserr));
    return result;
}

}  // namespace cuspforge
