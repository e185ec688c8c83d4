from .settings_manager import SettingsManager

# load default settings
try:
    SettingsManager.load_settings("default")
except FileNotFoundError as err:
    raise FileNotFoundError(f"{err}\n\nThe .json settings file for curvexfer could not be found.\n" +
                            f"If the package was installed without its data files, reinstall it with " +
                            f"'include_package_data' enabled (see setup.cfg).")
