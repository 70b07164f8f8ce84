package shop;

public class Failure {
}
