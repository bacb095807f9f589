from typing import Any


class Messages:
    def __init__(self, language: str = 'en'):
        self.language = language.lower()

    def get(self, key: str, **kwargs: Any) -> str:
        """Get message by key and format it with kwargs"""
        message = MESSAGES.get(self.language, {}).get(key, MESSAGES['en'][key])
        return message.format(**kwargs) if kwargs else message


# Message templates for different languages
MESSAGES = {
    'en': {
        # Catalog
        'catalog_header': "Catalog ({count} entries):",
        'catalog_line': "{id:<34} alpha={alpha:<6} {status:<11} {citation}",
        'eval_header': "{id} at z = {z}:",

        # Solver
        'solve_done': "✅ Converged in {iterations} iterations, residual {residual:.3e}",
        'solve_error': "sup-error against the closed form: {error:.3e}",
        'radial_done': "✅ Radial profile: {method}, {iterations} iterations, residual {residual:.3e}",

        # Classification
        'order_line': "alpha_hat = {alpha:.6f} ± {stderr:.2e} ({branch}), raw ratio {raw:.6f}",
        'completeness_line': "completeness of e^u: {verdict}",
        'curvature_line': "kappa = {kappa:.10g} at z = {z}",

        # Verdicts
        'verdict_line': "{name:<22} {verdict}",
        'verdict_pass': "✅ all claims pass",
        'verdict_fail': "❌ claim failed",
        'verdict_expected_fail': "✅ claim failed as expected",
        'precondition_failed': "⚠️ preconditions do not hold",
        'hypothesis_failed': "hypotheses failing: {failing}",

        # Potential
        'potential_line': "{quantity} = {value:.12g} (error {error:.2e}, {nodes} nodes)",
        'cross_check': "kernel {kernel:.12g}, finite difference {fd:.12g}, difference {diff:.2e}",

        # Errors and status
        'written': "Written: {path}",
        'error': "❌ {error}",
        'unexpected_error': "❌ An unexpected error occurred, see logs/critical_errors.log",
    },

    'ru': {
        'catalog_header': "Каталог ({count} записей):",
        'eval_header': "{id} в точке z = {z}:",

        'solve_done': "✅ Сходимость за {iterations} итераций, невязка {residual:.3e}",
        'solve_error': "sup-ошибка относительно точного решения: {error:.3e}",
        'radial_done': "✅ Радиальный профиль: {method}, {iterations} итераций, невязка {residual:.3e}",

        'completeness_line': "полнота e^u: {verdict}",

        'verdict_pass': "✅ все утверждения выполнены",
        'verdict_fail': "❌ утверждение нарушено",
        'verdict_expected_fail': "✅ утверждение нарушено, как и ожидалось",
        'precondition_failed': "⚠️ предпосылки не выполнены",
        'hypothesis_failed': "нарушенные гипотезы: {failing}",

        'written': "Записано: {path}",
        'error': "❌ {error}",
        'unexpected_error': "❌ Непредвиденная ошибка, см. logs/critical_errors.log",
    }
}
