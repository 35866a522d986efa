import pytest

from core.settings import SettingsManager, settings
from core.settings import testing
from shared.environment import AppEnvironment


class TestAppEnvironment:

    @pytest.mark.parametrize("value, expected", [
        ("testing", AppEnvironment.TESTING),
        (" Production ", AppEnvironment.PRODUCTION),
    ])
    def test_parse(self, value, expected):
        assert AppEnvironment.parse(value) is expected

    def test_parse_lists_valid_values(self):
        with pytest.raises(ValueError) as error:
            AppEnvironment.parse("qa")
        assert "local, development, staging, production, testing" in str(error.value)

    def test_env_file_names(self):
        assert AppEnvironment.TESTING.env_file_name == ".env.test"
        assert AppEnvironment.STAGING.env_file_name == ".env.stg"

    def test_only_deployed_environments_report_errors(self):
        assert AppEnvironment.PRODUCTION.reports_errors
        assert not AppEnvironment.LOCAL.reports_errors
        assert not AppEnvironment.TESTING.reports_errors


class TestSettings:

    def test_suite_runs_with_testing_settings(self):
        assert isinstance(settings, testing.TestingSettings)
        assert settings.ENVIRONMENT == "testing"

    def test_manager_class_map_covers_every_environment(self):
        assert set(SettingsManager.SETTINGS_CLASS_DICT) == set(AppEnvironment)
