from setuptools import setup

if __name__ == "__main__":
    setup(
        package_dir={"": "src"},
        packages=["lgradial"],
        package_data={"lgradial": ["schemas/*.json"]},
    )
